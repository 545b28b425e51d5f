#include "jumprep/diffusion.hpp"

#include "jumprep/errors.hpp"
#include "jumprep/parallel.hpp"
#include "jumprep/rng.hpp"

#include <algorithm>
#include <cmath>

namespace jumprep {

namespace {

constexpr double kSigmaFloor = 1e-8;
constexpr double kPanelHalfWidth = 10.0; // Gaussian tail beyond is ~1e-23
constexpr double kMaxJointLeaves = 1e7;

// 7-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr double kGx[7] = {0.0,
                           0.4058451513773971669066064,
                           -0.4058451513773971669066064,
                           0.7415311855993944398638648,
                           -0.7415311855993944398638648,
                           0.9491079123427585245261897,
                           -0.9491079123427585245261897};
constexpr double kGw[7] = {0.4179591836734693877551020, 0.3818300505051189449503698,
                           0.3818300505051189449503698, 0.2797053914892766679014678,
                           0.2797053914892766679014678, 0.1294849661688696932706114,
                           0.1294849661688696932706114};

} // namespace

void DiffusionSpec::validate() const {
    if (!gamma) throw ValidationError("DiffusionSpec needs a variance schedule");
    if (!(horizon > 0.0) || grid_steps == 0)
        throw ValidationError("DiffusionSpec needs a positive horizon and grid");
    if (std::fabs(gamma(0.0)) > 1e-12)
        throw ValidationError("variance schedule must start at 0");
    double prev = 0.0;
    for (std::size_t i = 1; i <= grid_steps; ++i) {
        const double t = horizon * double(i) / double(grid_steps);
        const double g = gamma(t);
        if (!std::isfinite(g)) throw ValidationError("variance schedule is not finite");
        if (g < prev - 1e-12)
            throw ValidationError("variance schedule must be nondecreasing");
        prev = g;
    }
}

DiffusionSpec DiffusionSpec::linear(double slope, double horizon, std::size_t grid_steps) {
    if (slope < 0.0) throw ValidationError("variance slope must be nonnegative");
    return DiffusionSpec{[slope](double t) { return slope * t; }, horizon, grid_steps};
}

ContinuousPayoff ContinuousPayoff::digital(double strike) {
    ContinuousPayoff p;
    p.kind_ = Kind::digital;
    p.parameter_ = strike;
    p.f_ = [strike](double y) { return y >= strike ? 1.0 : 0.0; };
    p.breakpoints_ = {strike};
    return p;
}

ContinuousPayoff ContinuousPayoff::identity() {
    ContinuousPayoff p;
    p.kind_ = Kind::identity;
    p.f_ = [](double y) { return y; };
    return p;
}

ContinuousPayoff ContinuousPayoff::square_centered(double c) {
    ContinuousPayoff p;
    p.kind_ = Kind::square_centered;
    p.parameter_ = c;
    p.f_ = [c](double y) { return y * y - c; };
    return p;
}

ContinuousPayoff ContinuousPayoff::constant(double value) {
    ContinuousPayoff p;
    p.kind_ = Kind::constant;
    p.parameter_ = value;
    p.f_ = [value](double) { return value; };
    return p;
}

ContinuousPayoff ContinuousPayoff::custom(std::function<double(double)> f,
                                          std::vector<double> breakpoints) {
    ContinuousPayoff p;
    p.kind_ = Kind::custom;
    p.f_ = std::move(f);
    p.breakpoints_ = std::move(breakpoints);
    std::sort(p.breakpoints_.begin(), p.breakpoints_.end());
    return p;
}

BrownianIntegrand::BrownianIntegrand(ContinuousPayoff payoff, DiffusionSpec spec)
    : payoff_(std::move(payoff)), spec_(std::move(spec)) {
    spec_.validate();
    gamma_h_ = spec_.gamma(spec_.horizon);
}

double BrownianIntegrand::remaining_variance(double t) const {
    return std::max(0.0, gamma_h_ - spec_.gamma(t));
}

double BrownianIntegrand::panels(double t, double y, bool score) const {
    const double sigma = std::sqrt(remaining_variance(t));
    if (sigma < kSigmaFloor) return score ? 0.0 : payoff_(y);

    std::vector<double> cuts;
    for (double v = -kPanelHalfWidth; v <= kPanelHalfWidth + 1e-12; v += 0.5)
        cuts.push_back(v);
    for (double b : payoff_.breakpoints()) {
        const double v = (b - y) / sigma;
        if (v > -kPanelHalfWidth && v < kPanelHalfWidth) cuts.push_back(v);
    }
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i];
        const double b = cuts[i + 1];
        if (b - a < 1e-14) continue;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double panel = 0.0;
        for (int k = 0; k < 7; ++k) {
            const double v = mid + half * kGx[k];
            double w = payoff_(y + sigma * v) * normal_pdf(v);
            if (score) w *= v / sigma;
            panel += kGw[k] * w;
        }
        total += half * panel;
    }
    return total;
}

double BrownianIntegrand::u_quadrature(double t, double y) const { return panels(t, y, false); }

double BrownianIntegrand::dy_quadrature(double t, double y) const { return panels(t, y, true); }

double BrownianIntegrand::u(double t, double y) const {
    const double s2 = remaining_variance(t);
    const double sigma = std::sqrt(s2);
    switch (payoff_.kind()) {
        case ContinuousPayoff::Kind::digital: {
            const double k = payoff_.parameter();
            if (sigma < kSigmaFloor) return y >= k ? 1.0 : 0.0;
            return normal_cdf((y - k) / sigma);
        }
        case ContinuousPayoff::Kind::identity:
            return y;
        case ContinuousPayoff::Kind::square_centered:
            return y * y + s2 - payoff_.parameter();
        case ContinuousPayoff::Kind::constant:
            return payoff_.parameter();
        case ContinuousPayoff::Kind::custom:
            return u_quadrature(t, y);
    }
    return 0.0;
}

double BrownianIntegrand::dy(double t, double y) const {
    const double sigma = std::sqrt(remaining_variance(t));
    switch (payoff_.kind()) {
        case ContinuousPayoff::Kind::digital: {
            if (sigma < kSigmaFloor)
                throw DiagnosticError(
                    "digital integrand at vanishing remaining variance has no limit");
            const double k = payoff_.parameter();
            return normal_pdf((k - y) / sigma) / sigma;
        }
        case ContinuousPayoff::Kind::identity:
            return 1.0;
        case ContinuousPayoff::Kind::square_centered:
            return 2.0 * y;
        case ContinuousPayoff::Kind::constant:
            return 0.0;
        case ContinuousPayoff::Kind::custom: {
            if (sigma >= kSigmaFloor) return dy_quadrature(t, y);
            if (!payoff_.breakpoints().empty())
                throw DiagnosticError(
                    "integrand at vanishing remaining variance is flagged for "
                    "non-smooth payoffs");
            const double h = 1e-6 * std::max(1.0, std::fabs(y));
            return (payoff_(y + h) - payoff_(y - h)) / (2.0 * h);
        }
    }
    return 0.0;
}

double BrownianIntegrand::dy_fd(double t, double y) const {
    const double sigma = std::sqrt(remaining_variance(t));
    const double h = std::max(1e-7, 1e-5 * sigma);
    return (u_quadrature(t, y + h) - u_quadrature(t, y - h)) / (2.0 * h);
}

ContinuousFactor continuous_factor(ContinuousPayoff payoff, const DiffusionSpec& spec,
                                   double y0) {
    ContinuousFactor f;
    f.beta = std::make_shared<const BrownianIntegrand>(payoff, spec);
    f.alpha = f.beta->u(0.0, y0);
    f.payoff = std::move(payoff);
    return f;
}

JumpFactor jump_factor(const MarkStatPayoff& payoff, const MultiJumpModel& jumps) {
    MarkovRepresentation rep(jumps, payoff);
    JumpFactor f;
    f.alpha = rep.m0();
    f.beta = rep.integrand();
    f.payoff = payoff.as_path_payoff();
    return f;
}

WeakRepresentation product_representation(ContinuousFactor cont, JumpFactor jump) {
    WeakRepresentation rep;
    rep.m0 = cont.alpha * jump.alpha;
    rep.terms.push_back({1.0, std::move(cont), std::move(jump)});
    return rep;
}

WeakRepresentation weak_representation(std::vector<ProductTerm> terms) {
    if (terms.empty()) throw ValidationError("weak representation needs at least one term");
    WeakRepresentation rep;
    for (const auto& term : terms) rep.m0 += term.coef * term.cont.alpha * term.jump.alpha;
    rep.terms = std::move(terms);
    return rep;
}

ReplicationReport replicate(const WeakRepresentation& rep, const JointModel& model,
                            std::size_t num_paths, std::uint64_t seed, int threads,
                            std::size_t grid_steps_override) {
    model.diffusion.validate();
    if (std::fabs(model.jumps.horizon() - model.diffusion.horizon) > 1e-12)
        throw ValidationError("joint model factors must share one horizon");

    const std::size_t steps =
        grid_steps_override ? grid_steps_override : model.diffusion.grid_steps;
    const double horizon = model.diffusion.horizon;
    const double dt = horizon / double(steps);
    const std::size_t nterms = rep.terms.size();
    const auto& comp = model.jumps.compensator();
    const std::size_t m = model.jumps.marks().size();

    std::vector<double> residual(num_paths);
    std::vector<double> cont_totals(num_paths);
    std::vector<double> jump_totals(num_paths);

    parallel_for(num_paths, threads, [&](std::size_t i) {
        CounterStream yrng(seed, i, stream_tag::brownian);
        CounterStream jrng(seed, i, stream_tag::events);
        const JumpPath jumps = model.jumps.sample_path(jrng);

        double y = model.y0;
        std::vector<double> mc(nterms), md(nterms);
        for (std::size_t k = 0; k < nterms; ++k) {
            mc[k] = rep.terms[k].cont.alpha;
            md[k] = rep.terms[k].jump.alpha;
        }

        double cont_total = 0.0;
        double jump_total = 0.0;
        std::size_t ev = 0;

        double gamma_prev = model.diffusion.gamma(0.0);
        for (std::size_t s = 0; s < steps; ++s) {
            const double t = horizon * double(s) / double(steps);
            const double t_next = horizon * double(s + 1) / double(steps);
            const double gamma_next = model.diffusion.gamma(t_next);
            const double dy_var = std::max(0.0, gamma_next - gamma_prev);
            gamma_prev = gamma_next;
            const double dy = std::sqrt(dy_var) * yrng.normal();

            const PathView past = past_through(jumps, t);

            // continuous leg: H_t dY with H = sum coef * Md_{t-} * beta_c(t, Y_t)
            double hsum = 0.0;
            for (std::size_t k = 0; k < nterms; ++k)
                hsum += rep.terms[k].coef * md[k] * rep.terms[k].cont.beta->dy(t, y);
            cont_total += hsum * dy;

            // jump leg compensator and the factor's own drift, left-point
            for (std::size_t k = 0; k < nterms; ++k) {
                double beta_lambda = 0.0;
                for (std::size_t z = 0; z < m; ++z) {
                    const double lam = comp.hazard(t, z, past);
                    if (lam != 0.0)
                        beta_lambda += rep.terms[k].jump.beta(t, z, past) * lam;
                }
                jump_total -= rep.terms[k].coef * mc[k] * beta_lambda * dt;
                md[k] -= beta_lambda * dt;
            }

            // events inside ]t, t_next]
            while (ev < jumps.events.size() && jumps.events[ev].time <= t_next) {
                const auto& e = jumps.events[ev];
                const PathView before = strict_past(jumps, e.time);
                for (std::size_t k = 0; k < nterms; ++k) {
                    const double b = rep.terms[k].jump.beta(e.time, e.mark, before);
                    jump_total += rep.terms[k].coef * mc[k] * b;
                    md[k] += b;
                }
                ++ev;
            }

            for (std::size_t k = 0; k < nterms; ++k)
                mc[k] += rep.terms[k].cont.beta->dy(t, y) * dy;
            y += dy;
        }

        double payoff = 0.0;
        for (const auto& term : rep.terms)
            payoff += term.coef * term.cont.payoff(y) * term.jump.payoff(jumps);

        residual[i] = rep.m0 + cont_total + jump_total - payoff;
        cont_totals[i] = cont_total;
        jump_totals[i] = jump_total;
    });

    ReplicationReport out;
    out.num_paths = num_paths;
    const MeanSe r = mean_se(residual);
    out.mean_error = r.mean;
    out.mean_error_se = r.se;
    std::vector<double> r2(num_paths);
    for (std::size_t i = 0; i < num_paths; ++i) r2[i] = residual[i] * residual[i];
    const MeanSe r2stats = mean_se(r2);
    out.rms_error = std::sqrt(std::max(0.0, r2stats.mean));
    out.rms_error_se = out.rms_error > 0.0 ? r2stats.se / (2.0 * out.rms_error) : 0.0;

    const MeanSe ca = mean_se(cont_totals);
    const MeanSe cb = mean_se(jump_totals);
    std::vector<double> prod(num_paths);
    for (std::size_t i = 0; i < num_paths; ++i)
        prod[i] = (cont_totals[i] - ca.mean) * (jump_totals[i] - cb.mean);
    const MeanSe cov = mean_se(prod);
    out.orthogonality_cov = cov.mean;
    out.orthogonality_se = cov.se;
    return out;
}

double JointDiscreteModel::leaf_count() const {
    double n = 1.0;
    for (const auto& s : slots) n *= s.diffusion ? 2.0 : double(marks.size() + 1);
    return n;
}

JointOracleResult enumerate_joint(const JointDiscreteModel& model,
                                  const std::function<double(std::span<const int>)>& payoff) {
    if (model.leaf_count() > kMaxJointLeaves)
        throw ScenarioError("joint outcome tree too large");
    if (!(model.step_value > 0.0)) throw ValidationError("walk step must be positive");
    const std::size_t K = model.slots.size();

    std::vector<std::size_t> radix(K);
    for (std::size_t k = 0; k < K; ++k) {
        radix[k] = model.slots[k].diffusion ? 2 : model.marks.size() + 1;
        if (!model.slots[k].diffusion &&
            model.slots[k].jump_probs.size() != model.marks.size())
            throw ValidationError("jump slot needs one probability per mark");
    }

    // level sizes
    std::vector<std::size_t> width(K + 1, 1);
    for (std::size_t k = 0; k < K; ++k) width[k + 1] = width[k] * radix[k];

    std::vector<std::vector<double>> values(K + 1);
    for (std::size_t k = 0; k <= K; ++k) values[k].resize(width[k]);

    // leaves
    std::vector<int> outcomes(K, 0);
    for (std::size_t leaf = 0; leaf < width[K]; ++leaf) {
        std::size_t idx = leaf;
        for (std::size_t k = K; k-- > 0;) {
            outcomes[k] = int(idx % radix[k]);
            idx /= radix[k];
        }
        values[K][leaf] = payoff(outcomes);
    }

    // backward conditional expectations
    for (std::size_t k = K; k-- > 0;) {
        for (std::size_t node = 0; node < width[k]; ++node) {
            const std::size_t base = node * radix[k];
            if (model.slots[k].diffusion) {
                values[k][node] = 0.5 * (values[k + 1][base] + values[k + 1][base + 1]);
            } else {
                const auto& p = model.slots[k].jump_probs;
                double none = 1.0;
                double v = 0.0;
                for (std::size_t z = 0; z < p.size(); ++z) {
                    none -= p[z];
                    v += p[z] * values[k + 1][base + z + 1];
                }
                if (none < -1e-12) throw ValidationError("jump probabilities exceed 1");
                v += none * values[k + 1][base];
                values[k][node] = v;
            }
        }
    }

    JointOracleResult out;
    out.m0 = values[0][0];

    // exact telescoping per leaf with the enumerated (H, G)
    for (std::size_t leaf = 0; leaf < width[K]; ++leaf) {
        std::size_t idx = leaf;
        for (std::size_t k = K; k-- > 0;) {
            outcomes[k] = int(idx % radix[k]);
            idx /= radix[k];
        }
        // skip zero-probability leaves
        double prob = 1.0;
        for (std::size_t k = 0; k < K; ++k) {
            if (model.slots[k].diffusion) {
                prob *= 0.5;
            } else {
                const auto& p = model.slots[k].jump_probs;
                double none = 1.0;
                for (double pz : p) none -= pz;
                prob *= outcomes[k] == 0 ? none : p[std::size_t(outcomes[k]) - 1];
            }
            if (prob == 0.0) break;
        }
        if (prob == 0.0) continue;

        double x = 0.0;
        std::size_t node = 0;
        for (std::size_t k = 0; k < K; ++k) {
            const std::size_t base = node * radix[k];
            if (model.slots[k].diffusion) {
                const double h = (values[k + 1][base] - values[k + 1][base + 1]) /
                                 (2.0 * model.step_value);
                const double dy = outcomes[k] == 0 ? model.step_value : -model.step_value;
                x += h * dy;
            } else {
                const auto& p = model.slots[k].jump_probs;
                double compensated = 0.0;
                for (std::size_t z = 0; z < p.size(); ++z)
                    compensated +=
                        p[z] * (values[k + 1][base + z + 1] - values[k + 1][base]);
                if (outcomes[k] != 0)
                    x += values[k + 1][base + std::size_t(outcomes[k])] -
                         values[k + 1][base];
                x -= compensated;
            }
            node = base + std::size_t(outcomes[k]);
        }
        out.max_representation_error =
            std::max(out.max_representation_error,
                     std::fabs(values[K][leaf] - out.m0 - x));
    }
    return out;
}

} // namespace jumprep
