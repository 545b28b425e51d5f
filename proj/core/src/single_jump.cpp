#include "jumprep/single_jump.hpp"

#include "jumprep/errors.hpp"
#include "jumprep/parallel.hpp"
#include "jumprep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jumprep {

namespace {
constexpr double kSurvivalFloor = 1e-14;
constexpr double kConditioningFloor = 1e-250;

std::function<double(double, std::size_t)> as_fn(const PayoffFunctional& h) {
    return [h](double t, std::size_t z) { return h(t, z); };
}
} // namespace

double payoff_mean(const PayoffFunctional& h, const JumpLaw& law) {
    return law.integrate(as_fn(h)) + h.at_infinity() * law.mass_at_infinity();
}

PayoffFunctional center_payoff(const PayoffFunctional& h, const JumpLaw& law) {
    const double abs_mass =
        law.integrate([&h](double t, std::size_t z) { return std::fabs(h(t, z)); });
    if (!std::isfinite(abs_mass))
        throw DiagnosticError("payoff is not nu-integrable: |h| integral diverges");
    const double mean = payoff_mean(h, law);
    if (!std::isfinite(mean))
        throw DiagnosticError("payoff mean is not finite");
    return PayoffFunctional::centered_from(
        [h, mean](double t, std::size_t z) { return h(t, z) - mean; },
        h.at_infinity() - mean, mean);
}

MartingalePath conditional_expectation_path(const PayoffFunctional& h,
                                            std::shared_ptr<const JumpLaw> law,
                                            const JumpPath& path) {
    if (!h.centered()) throw ValidationError("conditional_expectation_path expects a centered payoff");
    if (path.events.size() > 1)
        throw ValidationError("single-jump path may carry at most one event");

    const auto table = law->cumulative(as_fn(h));
    const double T = path.events.empty() ? std::numeric_limits<double>::infinity()
                                         : path.events.front().time;
    const std::size_t Z = path.events.empty() ? kNoMark : path.events.front().mark;
    const double revealed = path.events.empty() ? 0.0 : h(T, Z);

    const TimeGrid& lg = law->grid();
    std::vector<double> times;
    times.push_back(0.0);
    for (std::size_t i = 1; i <= lg.steps; ++i) {
        const double t = lg.node(i);
        if (t < path.horizon) times.push_back(t);
    }
    if (T <= path.horizon) times.push_back(T);
    times.push_back(path.horizon);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    auto before_jump = [&](double t) -> double {
        const double f = law->survival_all(t);
        if (f <= kSurvivalFloor)
            throw DiagnosticError(
                "impossible path: survival vanished at t but no jump was observed");
        return -law->cumulative_at(table, as_fn(h), t) / f;
    };

    std::vector<PathPoint> points;
    points.reserve(times.size());
    double previous = before_jump(0.0);
    points.push_back({0.0, previous, 0.0});
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double t = times[i];
        double value;
        if (t >= T)
            value = revealed;
        else
            value = before_jump(t);
        const double jump = t == T ? value - previous : 0.0;
        points.push_back({t, value, jump});
        previous = value;
    }
    const double initial = points.front().value;
    return MartingalePath(initial, std::move(points));
}

PredictableField chou_meyer_integrand(const PayoffFunctional& h,
                                      std::shared_ptr<const JumpLaw> law,
                                      std::shared_ptr<IntegrandDiagnostics> diag) {
    if (!h.centered()) throw ValidationError("chou_meyer_integrand expects a centered payoff");
    auto table = std::make_shared<const std::vector<double>>(law->cumulative(as_fn(h)));
    const double cutoff = law->cutoff();

    return PredictableField::deterministic(
        [h, law, table, diag, cutoff](double t, std::size_t z) -> double {
            if (t > cutoff) return 0.0;
            const double f = law->survival_all(t);
            if (f <= kSurvivalFloor) return 0.0;
            if (f < kConditioningFloor && diag) diag->conditioning_flagged.store(true);
            const double c = law->cumulative_at(*table, as_fn(h), t);
            return h(t, z) + c / f;
        });
}

IntegrabilityBound integrability_bound_check(const PayoffFunctional& h,
                                             std::shared_ptr<const JumpLaw> law, double t) {
    const double f_t = law->survival_all(t);
    if (f_t <= kSurvivalFloor)
        throw DiagnosticError("integrability bound undefined: F_t = 0 at the requested t");

    const PayoffFunctional hc = h.centered() ? h : center_payoff(h, *law);
    const PredictableField g = chou_meyer_integrand(hc, law);

    IntegrabilityBound out;
    out.lhs = law->integrate(
        [&g](double s, std::size_t z) { return std::fabs(g(s, z)); }, t);
    const double habs = law->integrate(
        [&hc](double s, std::size_t z) { return std::fabs(hc(s, z)); }, t);
    out.rhs = (1.0 + 1.0 / f_t) * habs;
    out.holds = out.lhs <= out.rhs + 1e-10;
    return out;
}

double uniqueness_gap(const PredictableField& g1, const PredictableField& g2,
                      const JumpLaw& law, double horizon) {
    auto diff2 = [&](double t, std::size_t z) {
        const double d = g1(t, z) - g2(t, z);
        return d * d;
    };
    // integrate() charges atoms with their plain mass m; reweight them to the
    // expected predictable-variation weight m (1 - m / F_{s-}).
    double total = law.integrate(diff2, horizon);
    for (const auto& a : law.atoms()) {
        if (a.time > horizon) continue;
        const double f_left = law.survival_all_left(a.time);
        if (f_left <= kSurvivalFloor) continue;
        const double d2 = diff2(a.time, a.mark);
        total += d2 * (a.mass * (1.0 - a.mass / f_left) - a.mass);
    }
    return total;
}

ReplicationStats single_jump_replication(const PayoffFunctional& h_centered,
                                         const PredictableField& g,
                                         std::shared_ptr<const JumpLaw> law, double horizon,
                                         std::size_t grid_steps, std::size_t num_paths,
                                         std::uint64_t seed, int threads) {
    if (!h_centered.centered())
        throw ValidationError("single_jump_replication expects a centered payoff");

    const TimeGrid grid{horizon, grid_steps};
    const std::size_t m = law->marks().size();

    // left-point drift of the quiet hazard: rate_w[i] = sum_z g(t_i,z) dens/F_{t_i-}
    std::vector<double> rate_w(grid.steps, 0.0);
    std::vector<double> drift(grid.steps + 1, 0.0);
    for (std::size_t i = 0; i < grid.steps; ++i) {
        const double t = grid.node(i);
        const double f_left = law->survival_all_left(t);
        if (f_left > kSurvivalFloor) {
            double r = 0.0;
            for (std::size_t z = 0; z < m; ++z) {
                const double lambda = law->density(t, z) / f_left;
                if (lambda != 0.0) r += g(t, z) * lambda;
            }
            rate_w[i] = r;
        }
        drift[i + 1] = drift[i] + rate_w[i] * grid.dt();
    }
    auto drift_at = [&](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= horizon) return drift[grid.steps];
        const std::size_t cell = grid.cell_of(t);
        return drift[cell] + rate_w[cell] * (t - grid.node(cell));
    };

    struct AtomTerm {
        double time;
        double w_mass;
    };
    std::vector<AtomTerm> atom_terms;
    for (const auto& a : law->atoms()) {
        if (!(a.time > 0.0) || a.time > horizon) continue;
        const double f_left = law->survival_all_left(a.time);
        if (f_left <= kSurvivalFloor) continue;
        atom_terms.push_back({a.time, g(a.time, a.mark) * (a.mass / f_left)});
    }

    std::vector<double> residuals(num_paths);
    parallel_for(num_paths, threads, [&](std::size_t i) {
        CounterStream rng(seed, i, stream_tag::events);
        const JumpEvent e = law->sample(rng);
        double x = 0.0;
        const double stop = std::min(e.time, horizon);
        if (e.is_jump() && e.time <= horizon) x += g(e.time, e.mark);
        x -= drift_at(stop);
        for (const auto& at : atom_terms) {
            if (at.time > stop) break;
            x -= at.w_mass;
        }
        const double payoff =
            e.is_jump() ? h_centered(e.time, e.mark) : h_centered.at_infinity();
        residuals[i] = payoff - x;
    });

    const MeanSe stats = mean_se(residuals);
    double ss = 0.0;
    for (double r : residuals) ss += r * r;
    ReplicationStats out;
    out.mean = stats.mean;
    out.se = stats.se;
    out.rms = std::sqrt(ss / static_cast<double>(num_paths));
    out.num_paths = num_paths;
    return out;
}

SingleJumpModel::SingleJumpModel(std::shared_ptr<const JumpLaw> law, double horizon,
                                 std::size_t grid_steps)
    : law_(std::move(law)),
      grid_{horizon, grid_steps},
      compensator_(single_jump_compensator(law_)) {}

JumpPath SingleJumpModel::sample_path(CounterStream& rng) const {
    JumpPath path;
    path.horizon = grid_.horizon;
    const JumpEvent e = law_->sample(rng);
    if (e.is_jump() && e.time <= grid_.horizon) path.events.push_back(e);
    return path;
}

const CompensatorSpec& SingleJumpModel::compensator() const { return compensator_; }

TimeGrid SingleJumpModel::grid() const { return grid_; }

} // namespace jumprep
