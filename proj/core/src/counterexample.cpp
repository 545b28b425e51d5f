#include "jumprep/counterexample.hpp"

#include "jumprep/errors.hpp"
#include "jumprep/parallel.hpp"
#include "jumprep/rng.hpp"

#include <algorithm>
#include <cmath>

namespace jumprep {

namespace {

struct WindowGrid {
    double step = 0.0;
    std::size_t steps = 0;        // cells covering ]t, t + h_max]
    std::vector<std::size_t> h_cells; // per window, cells it spans
};

WindowGrid build_grid(const CoxParams& p) {
    if (p.windows.empty() || p.n_levels.empty())
        throw ScenarioError("cox experiment needs windows and n levels");
    for (std::size_t i = 1; i < p.n_levels.size(); ++i)
        if (p.n_levels[i] <= p.n_levels[i - 1])
            throw ScenarioError("n levels must increase");
    const double h_min = *std::min_element(p.windows.begin(), p.windows.end());
    const double h_max = *std::max_element(p.windows.begin(), p.windows.end());
    if (!(h_min > 0.0)) throw ScenarioError("windows must be positive");

    WindowGrid g;
    g.step = h_min / static_cast<double>(p.steps_per_min_window);
    const double cells = h_max / g.step;
    g.steps = static_cast<std::size_t>(std::llround(cells));
    if (std::fabs(cells - static_cast<double>(g.steps)) > 1e-9)
        throw ScenarioError("windows are not commensurate with the grid step");
    for (double h : p.windows) {
        const double c = h / g.step;
        const auto n = static_cast<std::size_t>(std::llround(c));
        if (std::fabs(c - static_cast<double>(n)) > 1e-9)
            throw ScenarioError("window does not sit on the grid");
        g.h_cells.push_back(n);
    }
    return g;
}

// exact mass of exp(linear interpolation of W) over one cell
double cell_mass(double w_left, double w_right, double dt) {
    const double d = w_right - w_left;
    if (std::fabs(d) < 1e-12) return dt * std::exp(0.5 * (w_left + w_right));
    return dt * (std::exp(w_right) - std::exp(w_left)) / d;
}

} // namespace

CoxReport cox_counterexample_experiment(const CoxParams& p) {
    const WindowGrid grid = build_grid(p);
    const std::size_t NL = p.n_levels.size();
    const std::size_t NH = p.windows.size();
    const double n_max = p.n_levels.back();
    const std::size_t cells = NL * NH;

    // per-path samples, reduced in index order afterwards
    std::vector<std::vector<double>> dev2(cells, std::vector<double>(p.num_paths));
    std::vector<std::vector<double>> est_samples(cells, std::vector<double>(p.num_paths));
    std::vector<std::vector<double>> exceed(cells, std::vector<double>(p.num_paths));
    std::vector<std::vector<double>> exceed_exact(cells, std::vector<double>(p.num_paths));

    std::vector<double> factor(NH);
    for (std::size_t hi = 0; hi < NH; ++hi) {
        const double h = p.windows[hi];
        factor[hi] = 2.0 * (std::exp(0.5 * h) - 1.0) / h;
    }

    parallel_for(p.num_paths, p.threads, [&](std::size_t i) {
        CounterStream wrng(p.seed, i, stream_tag::brownian);
        CounterStream crng(p.seed, i, stream_tag::counts);
        CounterStream trng(p.seed, i, stream_tag::thinning);

        // W_t directly, then exact Gaussian increments across the window
        const double sqrt_dt = std::sqrt(grid.step);
        std::vector<double> w(grid.steps + 1);
        w[0] = std::sqrt(p.t) * wrng.normal();
        for (std::size_t s = 0; s < grid.steps; ++s)
            w[s + 1] = w[s] + sqrt_dt * wrng.normal();
        const double target = std::exp(w[0]);

        // thinning against the per-step majorant n_max e^{max(W_i, W_{i+1})}
        std::vector<std::uint64_t> counts(cells, 0);
        for (std::size_t s = 0; s < grid.steps; ++s) {
            const double w_hi = std::max(w[s], w[s + 1]);
            const double majorant = n_max * std::exp(w_hi);
            const std::uint64_t candidates = crng.poisson(majorant * grid.step);
            for (std::uint64_t c = 0; c < candidates; ++c) {
                const double u_pos = trng.uniform01();
                const double w_at = w[s] + (w[s + 1] - w[s]) * u_pos;
                const double ratio = std::exp(w_at - w_hi);
                const double u_acc = trng.uniform01();
                const double offset = (static_cast<double>(s) + u_pos) * grid.step;
                for (std::size_t ni = 0; ni < NL; ++ni) {
                    if (u_acc >= (p.n_levels[ni] / n_max) * ratio) continue;
                    for (std::size_t hi = 0; hi < NH; ++hi)
                        if (offset <= p.windows[hi] + 1e-15) ++counts[ni * NH + hi];
                }
            }
        }

        for (std::size_t ni = 0; ni < NL; ++ni) {
            for (std::size_t hi = 0; hi < NH; ++hi) {
                const std::size_t cell = ni * NH + hi;
                const double est = static_cast<double>(counts[cell]) /
                                   (p.n_levels[ni] * p.windows[hi]);
                const double dev = est - target;
                dev2[cell][i] = dev * dev;
                est_samples[cell][i] = est;
                exceed[cell][i] = std::fabs(dev) >= p.eps ? 1.0 : 0.0;
                const double dev_exact = est - factor[hi] * target;
                exceed_exact[cell][i] = std::fabs(dev_exact) >= p.eps ? 1.0 : 0.0;
            }
        }
    });

    CoxReport report;
    const double mean_exp_wt = std::exp(0.5 * p.t);

    for (std::size_t hi = 0; hi < NH; ++hi) {
        const double h = p.windows[hi];
        // E[I^2] for I = integral of e^{W_s} over the window (closed form)
        const double t = p.t;
        const double e_i2 =
            (4.0 / 3.0) * (0.5 * (std::exp(2.0 * (t + h)) - std::exp(2.0 * t)) -
                           std::exp(1.5 * t) * 2.0 *
                               (std::exp(0.5 * (t + h)) - std::exp(0.5 * t)));
        const double e_i = mean_exp_wt * h * factor[hi];
        const double var_mean_part =
            e_i2 - h * h * factor[hi] * factor[hi] * std::exp(2.0 * t);

        double prev_mse = 0.0;
        double prev_mse_se = 0.0;
        for (std::size_t ni = 0; ni < NL; ++ni) {
            const std::size_t cell = ni * NH + hi;
            const double n = p.n_levels[ni];
            CoxCell out;
            out.n = n;
            out.h = h;
            out.exact_factor = factor[hi];
            const MeanSe ex = mean_se(exceed[cell]);
            out.exceed_prob = ex.mean;
            out.exceed_se = ex.se;
            out.exceed_prob_exact_center = mean_se(exceed_exact[cell]).mean;
            out.bound_plain = mean_exp_wt / (n * h * p.eps * p.eps);
            out.bound_exact =
                (e_i / (n * h * h) + var_mean_part / (h * h)) / (p.eps * p.eps);
            const MeanSe ms = mean_se(dev2[cell]);
            out.mse = ms.mean;
            out.mse_se = ms.se;
            const MeanSe me = mean_se(est_samples[cell]);
            out.mean_est = me.mean;
            out.mean_est_se = me.se;

            if (ni > 0) {
                const double slack =
                    3.0 * std::sqrt(ms.se * ms.se + prev_mse_se * prev_mse_se);
                if (ms.mean > prev_mse + slack) report.mse_monotone_in_n = false;
            }
            prev_mse = ms.mean;
            prev_mse_se = ms.se;
            report.cells.push_back(out);
        }
    }

    report.frozen = cox_conditional_mean_check(p, false);
    return report;
}

FrozenWCheck cox_conditional_mean_check(const CoxParams& p, bool zero_w) {
    const WindowGrid grid = build_grid(p);
    const double n = p.n_levels.back();
    const double h_max = *std::max_element(p.windows.begin(), p.windows.end());

    // one frozen Brownian window, shared by every replication below
    std::vector<double> w(grid.steps + 1, 0.0);
    if (!zero_w) {
        CounterStream wrng(p.seed, 0x7fffffffull, stream_tag::brownian);
        const double sqrt_dt = std::sqrt(grid.step);
        w[0] = std::sqrt(p.t) * wrng.normal();
        for (std::size_t s = 0; s < grid.steps; ++s)
            w[s + 1] = w[s] + sqrt_dt * wrng.normal();
    }

    double mass = 0.0;
    for (std::size_t s = 0; s < grid.steps; ++s) mass += cell_mass(w[s], w[s + 1], grid.step);

    std::vector<double> est(p.num_paths);
    parallel_for(p.num_paths, p.threads, [&](std::size_t i) {
        CounterStream crng(p.seed ^ 0xfeedbeefull, i, stream_tag::counts);
        CounterStream trng(p.seed ^ 0xfeedbeefull, i, stream_tag::thinning);
        std::uint64_t count = 0;
        for (std::size_t s = 0; s < grid.steps; ++s) {
            const double w_hi = std::max(w[s], w[s + 1]);
            const double majorant = n * std::exp(w_hi);
            const std::uint64_t candidates = crng.poisson(majorant * grid.step);
            for (std::uint64_t c = 0; c < candidates; ++c) {
                const double u_pos = trng.uniform01();
                const double w_at = w[s] + (w[s + 1] - w[s]) * u_pos;
                if (trng.uniform01() < std::exp(w_at - w_hi)) ++count;
            }
        }
        est[i] = static_cast<double>(count) / (n * h_max);
    });

    const MeanSe stats = mean_se(est);
    FrozenWCheck out;
    out.mean_est = stats.mean;
    out.se = stats.se;
    out.target = mass / h_max;
    return out;
}

} // namespace jumprep
