#include "jumprep/suite.hpp"

#include "jumprep/calculus.hpp"
#include "jumprep/errors.hpp"
#include "jumprep/parallel.hpp"
#include "jumprep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace jumprep {

namespace {

struct Collector {
    Report report;
    const std::vector<std::string>& selection;

    bool wants(const std::string& name) const {
        if (selection.empty()) return true;
        return std::find(selection.begin(), selection.end(), name) != selection.end();
    }

    void add(const std::string& check, double value, double tolerance, bool pass,
             std::optional<double> se = std::nullopt) {
        ResultRow row;
        row.check = check;
        row.value = value;
        row.std_error = se;
        row.tolerance = tolerance;
        row.status = pass ? "pass" : "fail";
        report.rows.push_back(std::move(row));
    }

    void skip(const std::string& check, const char* /*reason*/) {
        ResultRow row;
        row.check = check;
        row.status = "skip";
        report.rows.push_back(std::move(row));
    }
};

PayoffFunctional default_single_jump_payoff(const SingleJumpScenario& sc) {
    const double tau = 0.5 * sc.law->grid().horizon;
    return PayoffFunctional([tau](double t, std::size_t) { return t <= tau ? 1.0 : 0.0; },
                            0.0);
}

void suite_single_jump(const Scenario& scenario, const SuiteOptions& opt, Collector& out) {
    const auto& sc = scenario.single_jump();
    const auto law = sc.law;
    const std::uint64_t seed = opt.seed_override ? opt.seed_override : scenario.seed;

    if (out.wants("law_mass_balance")) {
        const double total = law->mass_upto(law->grid().horizon) + law->mass_at_infinity();
        out.add("law_mass_balance", std::fabs(total - 1.0), 1e-12,
                std::fabs(total - 1.0) <= 1e-12);
    }

    if (out.wants("survival_window_identity")) {
        double worst = 0.0;
        for (double t : {0.25, 0.5, 0.75}) {
            const double w = t * law->grid().horizon;
            worst = std::max(worst, std::fabs(law->survival_all(0.0) -
                                              law->survival_all(w) - law->mass_upto(w)));
        }
        out.add("survival_window_identity", worst, 1e-12, worst <= 1e-12);
    }

    if (out.wants("compensator_predictability")) {
        const auto comp = single_jump_compensator(law);
        JumpPath later{{{0.9 * sc.observe_horizon, 0}}, sc.observe_horizon};
        JumpPath never{{}, sc.observe_horizon};
        double worst = 0.0;
        for (double f : {0.2, 0.5, 0.8}) {
            const double t = f * 0.9 * sc.observe_horizon;
            for (std::size_t z = 0; z < law->marks().size(); ++z)
                worst = std::max(worst,
                                 std::fabs(comp.hazard(t, z, strict_past(later, t)) -
                                           comp.hazard(t, z, strict_past(never, t))));
        }
        out.add("compensator_predictability", worst, 0.0, worst == 0.0);
    }

    if (out.wants("binned_law_reproduction")) {
        // empirical law of sampled (T, Z) against nu on a coarse partition
        const std::size_t n = std::max<std::size_t>(opt.num_paths, 1000);
        const std::size_t bins = 8;
        const double h = law->grid().horizon;
        std::vector<double> counts(bins * law->marks().size() + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            CounterStream rng(seed, i, stream_tag::events);
            const JumpEvent e = law->sample(rng);
            if (!e.is_jump()) {
                counts.back() += 1.0;
                continue;
            }
            auto bin = std::min(bins - 1, static_cast<std::size_t>(e.time / h * bins));
            counts[bin * law->marks().size() + e.mark] += 1.0;
        }
        double worst_sigmas = 0.0;
        for (std::size_t b = 0; b < bins; ++b) {
            for (std::size_t z = 0; z < law->marks().size(); ++z) {
                const double lo = h * double(b) / double(bins);
                const double hi = h * double(b + 1) / double(bins);
                const double p = law->mass_upto(hi, z) - law->mass_upto(lo, z);
                const double phat = counts[b * law->marks().size() + z] / double(n);
                const double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / double(n));
                worst_sigmas = std::max(worst_sigmas, std::fabs(phat - p) / se);
            }
        }
        const double p_inf = law->mass_at_infinity();
        const double se_inf =
            std::sqrt(std::max(p_inf * (1.0 - p_inf), 1e-12) / double(n));
        worst_sigmas =
            std::max(worst_sigmas, std::fabs(counts.back() / double(n) - p_inf) / se_inf);
        out.add("binned_law_reproduction", worst_sigmas, 4.0, worst_sigmas <= 4.0);
    }

    const auto h = default_single_jump_payoff(sc);
    const auto centered = center_payoff(h, *law);
    const auto g = chou_meyer_integrand(centered, law);
    const auto comp = single_jump_compensator(law);

    if (out.wants("representation_pathwise")) {
        // sup_t |M_t - M_0 - (g*mu~)_t| over simulated paths; the left-point
        // quadrature error bound is derived from the integrand itself
        const TimeGrid grid{sc.observe_horizon, std::max<std::size_t>(sc.grid_steps, 64)};
        double tv = 0.0;
        {
            JumpPath quiet{{}, sc.observe_horizon};
            double prev = 0.0;
            for (std::size_t i = 0; i <= grid.steps; ++i) {
                const double t = grid.node(i);
                double rate_w = 0.0;
                for (std::size_t z = 0; z < law->marks().size(); ++z)
                    rate_w += g(t, z) * comp.hazard(t, z, strict_past(quiet, t));
                if (i > 0) tv += std::fabs(rate_w - prev);
                prev = rate_w;
            }
        }
        const double bound = 0.5 * grid.dt() * (tv + 2.0) + 1e-9;
        double worst = 0.0;
        const std::size_t paths = 48;
        for (std::size_t i = 0; i < paths; ++i) {
            CounterStream rng(seed ^ 0xabcdu, i, stream_tag::events);
            JumpPath path{{}, sc.observe_horizon};
            const JumpEvent e = law->sample(rng);
            if (e.is_jump() && e.time <= sc.observe_horizon) path.events.push_back(e);
            const auto m = conditional_expectation_path(centered, law, path);
            const auto x = stochastic_integral(g, path, comp, grid);
            for (std::size_t j = 0; j <= grid.steps; j += 8) {
                const double t = grid.node(j);
                worst = std::max(worst, std::fabs(m.at(t) - x.at(t)));
            }
        }
        out.add("representation_pathwise", worst, bound, worst <= bound);
    }

    if (out.wants("replication_mc")) {
        const auto rep = single_jump_replication(centered, g, law, sc.observe_horizon,
                                                 sc.grid_steps, opt.num_paths, seed,
                                                 opt.threads);
        const bool pass = std::fabs(rep.mean) <= opt.se_band * std::max(rep.se, 1e-300);
        out.add("replication_mc", rep.mean, opt.se_band * rep.se, pass, rep.se);
    }

    if (out.wants("fault_canary")) {
        // a deliberately tampered integrand must break replication
        auto bad = PredictableField::deterministic(
            [g](double t, std::size_t z) { return g(t, z) + 0.1; });
        const TimeGrid grid{sc.observe_horizon, 256};
        double worst = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            CounterStream rng(seed ^ 0x77u, i, stream_tag::events);
            JumpPath path{{}, sc.observe_horizon};
            const JumpEvent e = law->sample(rng);
            if (e.is_jump() && e.time <= sc.observe_horizon) path.events.push_back(e);
            const auto m = conditional_expectation_path(centered, law, path);
            const auto x = stochastic_integral(bad, path, comp, grid);
            worst = std::max(worst, std::fabs(m.at(sc.observe_horizon) -
                                              x.at(sc.observe_horizon)));
        }
        out.add("fault_canary", worst, 1e-2, worst > 1e-2);
    }

    if (out.wants("integrability_bound")) {
        const double t = sc.observe_horizon;
        if (law->survival_all(t) <= 1e-14) {
            out.skip("integrability_bound", "F_t = 0 at the probe time");
        } else {
            const auto bc = integrability_bound_check(h, law, t);
            out.add("integrability_bound", bc.rhs - bc.lhs, 0.0, bc.holds);
        }
    }

    if (out.wants("uniqueness_zero_gap")) {
        const double gap = uniqueness_gap(g, g, *law, sc.observe_horizon);
        out.add("uniqueness_zero_gap", gap, opt.exact_tol, gap <= opt.exact_tol);
    }

    if (out.wants("qv_pushforward")) {
        const TimeGrid grid{sc.observe_horizon, 128};
        double worst = 0.0;
        for (std::size_t i = 0; i < 16; ++i) {
            CounterStream rng(seed ^ 0x3141u, i, stream_tag::events);
            JumpPath path{{}, sc.observe_horizon};
            const JumpEvent e = law->sample(rng);
            if (e.is_jump() && e.time <= sc.observe_horizon) path.events.push_back(e);
            const auto rep = qv_pushforward_check(g, path, comp, grid);
            worst = std::max(worst, std::max(rep.max_optional_gap,
                                             rep.max_predictable_gap));
        }
        out.add("qv_pushforward", worst, opt.exact_tol, worst <= opt.exact_tol);
    }

    if (out.wants("isometry_mc")) {
        SingleJumpModel model(law, sc.observe_horizon, std::min<std::size_t>(512, sc.grid_steps));
        const auto est = isometry_estimate(g, model, std::max<std::size_t>(opt.num_paths, 100),
                                           seed ^ 0x1591u, opt.threads);
        const double combined =
            std::sqrt(est.lhs_se * est.lhs_se + est.rhs_se * est.rhs_se);
        out.add("isometry_mc", std::fabs(est.lhs - est.rhs),
                opt.se_band * std::max(combined, 1e-300), est.consistent(opt.se_band),
                combined);
    }
}

void suite_discrete(const Scenario& scenario, const SuiteOptions& opt, Collector& out) {
    const auto model = scenario.discrete().model;
    PathPayoff payoff{"suite", [](const JumpPath& p) {
                          double v = 0.25;
                          for (const auto& e : p.events)
                              v += (e.mark % 2 == 0 ? 1.0 : -0.6) * (1.0 + 0.3 * e.time);
                          return v * v;
                      }};
    EnumerationOracle oracle(*model, payoff);

    if (out.wants("oracle_total_probability")) {
        double total = 0.0;
        oracle.for_each_leaf(
            [&](std::span<const int>, double p, const JumpPath&) { total += p; });
        out.add("oracle_total_probability", std::fabs(total - 1.0), 1e-12,
                std::fabs(total - 1.0) <= 1e-12);
    }

    if (out.wants("oracle_representation")) {
        const double residual = oracle.representation_residual();
        out.add("oracle_representation", residual, opt.exact_tol,
                residual <= opt.exact_tol);
    }

    if (out.wants("oracle_isometry_exact")) {
        const auto iso = oracle.isometry(oracle.integrand_field());
        out.add("oracle_isometry_exact", std::fabs(iso.lhs - iso.rhs), 1e-12,
                std::fabs(iso.lhs - iso.rhs) <= 1e-12);
    }

    if (out.wants("integrator_vs_oracle")) {
        const auto field = oracle.integrand_field();
        const auto comp = model->compensator();
        const TimeGrid grid{model->horizon(), 8};
        double worst = 0.0;
        oracle.for_each_leaf([&](std::span<const int> outcomes, double prob,
                                 const JumpPath& path) {
            if (prob == 0.0) return;
            const auto x = stochastic_integral(field, path, comp, grid);
            for (std::size_t k = 0; k < outcomes.size(); ++k) {
                std::vector<int> prefix(outcomes.begin(), outcomes.begin() + long(k) + 1);
                worst = std::max(worst, std::fabs(oracle.value(prefix) - oracle.m0() -
                                                  x.at(model->slot_time(k))));
            }
        });
        out.add("integrator_vs_oracle", worst, opt.exact_tol, worst <= opt.exact_tol);
    }

    if (out.wants("qv_pushforward")) {
        auto w = PredictableField::deterministic(
            [](double t, std::size_t z) { return std::sin(11.0 * t) + 0.5 * double(z); });
        const auto comp = model->compensator();
        const TimeGrid grid{model->horizon(), 8};
        double worst = 0.0;
        oracle.for_each_leaf([&](std::span<const int>, double, const JumpPath& path) {
            const auto rep = qv_pushforward_check(w, path, comp, grid);
            worst =
                std::max(worst, std::max(rep.max_optional_gap, rep.max_predictable_gap));
        });
        out.add("qv_pushforward", worst, opt.exact_tol, worst <= opt.exact_tol);
    }
}

void suite_multi_jump(const Scenario& scenario, const SuiteOptions& opt, Collector& out) {
    const auto model = scenario.multi_jump().model;
    const std::uint64_t seed = opt.seed_override ? opt.seed_override : scenario.seed;
    double total_rate = 0.0;
    for (double r : model->rates()) total_rate += r;

    if (out.wants("event_count_mean")) {
        if (total_rate <= 0.0) {
            out.skip("event_count_mean", "zero hazard");
        } else {
            std::vector<double> counts(opt.num_paths);
            for_each_path(*model, opt.num_paths, seed, opt.threads,
                          [&](std::size_t i, const JumpPath& p, bool) {
                              counts[i] = double(p.events.size());
                          });
            const MeanSe stats = mean_se(counts);
            const double target = total_rate * model->horizon();
            out.add("event_count_mean", std::fabs(stats.mean - target),
                    4.0 * stats.se, std::fabs(stats.mean - target) <= 4.0 * stats.se,
                    stats.se);
        }
    }

    if (out.wants("martingale_mean_zero")) {
        if (total_rate <= 0.0) {
            out.skip("martingale_mean_zero", "zero hazard");
        } else {
            auto w = PredictableField::deterministic(
                [](double t, std::size_t z) { return (1.0 + t) * (z == 0 ? 1.0 : -1.5); });
            const std::size_t n = opt.num_paths;
            std::vector<double> terminal(n);
            double fixed_drift = 0.0;
            const TimeGrid grid = model->grid();
            for (std::size_t i = 0; i < grid.steps; ++i) {
                const double t = grid.node(i);
                for (std::size_t z = 0; z < model->marks().size(); ++z)
                    fixed_drift += w(t, z, {}) * model->rates()[z] * grid.dt();
            }
            for_each_path(*model, n, seed ^ 0x99u, opt.threads,
                          [&](std::size_t i, const JumpPath& p, bool) {
                              double x = -fixed_drift;
                              for (const auto& e : p.events) x += w(e.time, e.mark, {});
                              terminal[i] = x;
                          });
            const MeanSe stats = mean_se(terminal);
            out.add("martingale_mean_zero", std::fabs(stats.mean), 4.0 * stats.se,
                    std::fabs(stats.mean) <= 4.0 * stats.se, stats.se);
        }
    }

    if (out.wants("isometry_mc")) {
        if (total_rate <= 0.0) {
            out.skip("isometry_mc", "zero hazard");
        } else {
            auto w = PredictableField::deterministic(
                [](double t, std::size_t z) { return 1.0 + 0.5 * t + 0.25 * double(z); });
            const auto est = isometry_estimate(w, *model,
                                               std::max<std::size_t>(opt.num_paths, 100),
                                               seed ^ 0x7u, opt.threads);
            const double combined =
                std::sqrt(est.lhs_se * est.lhs_se + est.rhs_se * est.rhs_se);
            out.add("isometry_mc", std::fabs(est.lhs - est.rhs),
                    opt.se_band * std::max(combined, 1e-300), est.consistent(opt.se_band),
                    combined);
        }
    }

    if (out.wants("count_integrand_is_one")) {
        if (total_rate <= 0.0 || total_rate * model->horizon() > 500.0) {
            out.skip("count_integrand_is_one", "not DP-representable");
        } else {
            MarkStatPayoff count{"count", std::vector<double>(model->marks().size(), 1.0),
                                 [](double x) { return x; }, 1.0};
            MarkovRepresentation rep(*model, count);
            double worst = 0.0;
            for (double f : {0.1, 0.5, 0.9}) {
                const double t = f * model->horizon();
                for (std::size_t z = 0; z < model->marks().size(); ++z)
                    worst = std::max(worst,
                                     std::fabs(rep.integrand_at(t, 0.0, z) - 1.0));
            }
            out.add("count_integrand_is_one", worst, 1e-8, worst <= 1e-8);
        }
    }

    if (out.wants("pasting_residual")) {
        if (total_rate <= 0.0 || total_rate * model->horizon() > 500.0) {
            out.skip("pasting_residual", "not DP-representable");
        } else {
            std::vector<double> weights;
            double step = std::numeric_limits<double>::infinity();
            for (const auto& m : model->marks().marks()) {
                weights.push_back(m.value);
                if (m.value != 0.0) step = std::min(step, std::fabs(m.value));
            }
            if (!std::isfinite(step)) step = 1.0;
            MarkStatPayoff payoff{"sumsq", weights,
                                  [](double x) { return x * x; }, step};
            MarkovRepresentation rep(*model, payoff);
            auto field = rep.integrand();
            auto path_payoff = payoff.as_path_payoff();
            double worst = 0.0;
            for (std::size_t i = 0; i < 32; ++i) {
                CounterStream rng(seed ^ 0x51u, i, stream_tag::events);
                const JumpPath path = model->sample_path(rng);
                const auto x =
                    stochastic_integral(field, path, model->compensator(), model->grid());
                worst = std::max(
                    worst, std::fabs(x.terminal() - (path_payoff(path) - rep.m0())));
            }
            const double bound = 5.0 * total_rate * model->horizon() /
                                     double(model->grid().steps) +
                                 1e-8;
            out.add("pasting_residual", worst, bound, worst <= bound);
        }
    }
}

void suite_truncation(const Scenario& scenario, const SuiteOptions& opt, Collector& out) {
    const auto& sc = scenario.truncation();
    const std::uint64_t seed = opt.seed_override ? opt.seed_override : scenario.seed;
    const std::size_t paths = std::min<std::size_t>(sc.num_paths, opt.num_paths);

    const auto study = truncation_study(sc.family, StudyPayoffKind::mark_sum, sc.levels,
                                        sc.reference_level, paths, seed, opt.threads);

    if (out.wants("truncation_residual_vs_tail")) {
        double worst_sigmas = 0.0;
        for (const auto& row : study.rows) {
            const double target = sc.family.tail_l2(row.level, study.reference_level);
            worst_sigmas = std::max(
                worst_sigmas, std::fabs(row.residual - target) / std::max(row.residual_se,
                                                                          1e-300));
        }
        out.add("truncation_residual_vs_tail", worst_sigmas, opt.se_band,
                worst_sigmas <= opt.se_band);
    }

    if (out.wants("truncation_cap_fraction")) {
        const double frac = double(study.cap_hits) / double(study.num_paths);
        out.add("truncation_cap_fraction", frac, 1e-3, frac < 1e-3);
    }

    if (out.wants("truncation_gaps_decreasing")) {
        const auto indicator =
            truncation_study(sc.family, StudyPayoffKind::indicator_positive, sc.levels,
                             sc.reference_level, paths, seed ^ 0x5u, opt.threads);
        out.add("truncation_gaps_decreasing", indicator.gaps_decreasing ? 1.0 : 0.0, 1.0,
                indicator.gaps_decreasing);
    }
}

void suite_cox(const Scenario& scenario, const SuiteOptions& opt, Collector& out) {
    auto params = scenario.cox().params;
    if (opt.seed_override) params.seed = opt.seed_override;
    params.threads = opt.threads;
    params.num_paths = std::min(params.num_paths, opt.num_paths);
    const auto report = cox_counterexample_experiment(params);

    if (out.wants("cox_chebyshev_bound")) {
        double worst = -1e300;
        for (const auto& cell : report.cells)
            worst = std::max(worst, cell.exceed_prob - cell.bound_plain -
                                        opt.se_band * cell.exceed_se);
        out.add("cox_chebyshev_bound", worst, 0.0, worst <= 0.0);
    }

    if (out.wants("cox_exact_center_bound")) {
        double worst = -1e300;
        for (const auto& cell : report.cells)
            worst = std::max(worst, cell.exceed_prob_exact_center - cell.bound_exact -
                                        opt.se_band * cell.exceed_se);
        out.add("cox_exact_center_bound", worst, 0.0, worst <= 0.0);
    }

    if (out.wants("cox_mse_monotone")) {
        out.add("cox_mse_monotone", report.mse_monotone_in_n ? 1.0 : 0.0, 1.0,
                report.mse_monotone_in_n);
    }

    if (out.wants("cox_conditional_mean")) {
        const double gap = std::fabs(report.frozen.mean_est - report.frozen.target);
        out.add("cox_conditional_mean", gap, 4.0 * report.frozen.se,
                gap <= 4.0 * report.frozen.se, report.frozen.se);
    }
}

void suite_joint(const Scenario& scenario, const SuiteOptions& opt, Collector& out) {
    const auto& sc = scenario.joint();
    const std::uint64_t seed = opt.seed_override ? opt.seed_override : scenario.seed;

    PayoffFile file;
    file.kind = "product";
    ProductTermSpec term;
    term.continuous_kind = "digital";
    term.continuous_param = sc.y0;
    term.jump_kind = "count_eq";
    term.jump_param = 0.0;
    file.terms.push_back(term);
    const auto rep = make_weak_representation(file, sc);

    JointModel model{sc.diffusion, *sc.jumps, sc.y0};
    const auto report = replicate(rep, model, opt.num_paths, seed, opt.threads);

    if (out.wants("joint_replication_mean")) {
        out.add("joint_replication_mean", std::fabs(report.mean_error),
                opt.se_band * report.mean_error_se,
                std::fabs(report.mean_error) <=
                    opt.se_band * std::max(report.mean_error_se, 1e-300),
                report.mean_error_se);
    }

    if (out.wants("joint_orthogonality")) {
        out.add("joint_orthogonality", std::fabs(report.orthogonality_cov),
                4.0 * report.orthogonality_se,
                std::fabs(report.orthogonality_cov) <=
                    4.0 * std::max(report.orthogonality_se, 1e-300),
                report.orthogonality_se);
    }

    if (out.wants("digital_integrand_closed_form")) {
        BrownianIntegrand b(ContinuousPayoff::digital(sc.y0), sc.diffusion);
        double worst = 0.0;
        for (double f : {0.0, 0.3, 0.7, 0.9}) {
            const double t = f * sc.diffusion.horizon;
            const double sigma = std::sqrt(b.remaining_variance(t));
            for (double y : {sc.y0 - 0.5, sc.y0, sc.y0 + 0.8}) {
                const double exact = normal_pdf((sc.y0 - y) / sigma) / sigma;
                const double rel = std::fabs(b.dy_quadrature(t, y) - exact) /
                                   std::max(1.0, std::fabs(exact));
                worst = std::max(worst, rel);
            }
        }
        out.add("digital_integrand_closed_form", worst, 1e-6, worst <= 1e-6);
    }

    if (out.wants("joint_discrete_oracle")) {
        JointDiscreteModel dm;
        dm.step_value = 0.25;
        dm.marks = sc.jumps->marks();
        dm.horizon = sc.diffusion.horizon;
        std::vector<double> probs(dm.marks.size(), 0.15 / double(dm.marks.size()));
        for (int k = 0; k < 4; ++k) {
            dm.slots.push_back({true, {}});
            dm.slots.push_back({false, probs});
        }
        const auto result = enumerate_joint(dm, [](std::span<const int> codes) {
            double v = 0.7;
            for (int c : codes) v += 0.2 * double(c) - 0.05 * v;
            return v;
        });
        out.add("joint_discrete_oracle", result.max_representation_error, opt.exact_tol,
                result.max_representation_error <= opt.exact_tol);
    }
}

} // namespace

std::vector<std::string> suite_check_names(const std::string& kind) {
    if (kind == "single_jump")
        return {"law_mass_balance", "survival_window_identity",
                "compensator_predictability", "binned_law_reproduction",
                "representation_pathwise", "replication_mc", "fault_canary",
                "integrability_bound", "uniqueness_zero_gap", "qv_pushforward",
                "isometry_mc"};
    if (kind == "discrete")
        return {"oracle_total_probability", "oracle_representation",
                "oracle_isometry_exact", "integrator_vs_oracle", "qv_pushforward"};
    if (kind == "multi_jump")
        return {"event_count_mean", "martingale_mean_zero", "isometry_mc",
                "count_integrand_is_one", "pasting_residual"};
    if (kind == "truncation_family")
        return {"truncation_residual_vs_tail", "truncation_cap_fraction",
                "truncation_gaps_decreasing"};
    if (kind == "cox")
        return {"cox_chebyshev_bound", "cox_exact_center_bound", "cox_mse_monotone",
                "cox_conditional_mean"};
    if (kind == "joint_diffusion")
        return {"joint_replication_mean", "joint_orthogonality",
                "digital_integrand_closed_form", "joint_discrete_oracle"};
    throw ScenarioError("unknown scenario kind: " + kind);
}

Report run_property_suite(const Scenario& scenario, const SuiteOptions& options) {
    Collector out{Report{}, options.selection};
    for (const auto& name : options.selection) {
        const auto known = suite_check_names(scenario.kind);
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw ScenarioError("unknown check '" + name + "' for kind " + scenario.kind);
    }
    if (scenario.kind == "single_jump")
        suite_single_jump(scenario, options, out);
    else if (scenario.kind == "discrete")
        suite_discrete(scenario, options, out);
    else if (scenario.kind == "multi_jump")
        suite_multi_jump(scenario, options, out);
    else if (scenario.kind == "truncation_family")
        suite_truncation(scenario, options, out);
    else if (scenario.kind == "cox")
        suite_cox(scenario, options, out);
    else if (scenario.kind == "joint_diffusion")
        suite_joint(scenario, options, out);
    else
        throw ScenarioError("unknown scenario kind: " + scenario.kind);
    return out.report;
}

} // namespace jumprep
