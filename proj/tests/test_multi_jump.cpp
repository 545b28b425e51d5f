#include "doctest.h"

#include "jumprep/calculus.hpp"
#include "jumprep/counterexample.hpp"
#include "jumprep/errors.hpp"
#include "jumprep/multi_jump.hpp"
#include "jumprep/parallel.hpp"
#include "jumprep/rng.hpp"
#include "jumprep/single_jump.hpp"
#include "jumprep/truncation.hpp"

#include <cmath>
#include <memory>
#include <vector>

using namespace jumprep;

namespace {

MarkSpace pm_marks() { return MarkSpace({{"plus", 1.0}, {"minus", -1.0}}); }

MarkStatPayoff count_stat() {
    return MarkStatPayoff{"count", {1.0, 1.0}, [](double x) { return x; }, 1.0};
}

} // namespace

TEST_CASE("zero hazard produces only empty paths") {
    auto model = MultiJumpModel::compound_poisson(pm_marks(), {0.0, 0.0}, 1.0, 16, 32);
    const auto batch = simulate_paths(model, 200, 3);
    for (const auto& p : batch.paths) CHECK(p.events.empty());
    CHECK(batch.cap_hits == 0);
}

TEST_CASE("Poisson event count matches its mean within 4 SE") {
    auto model = MultiJumpModel::compound_poisson(pm_marks(), {0.6, 0.4}, 1.0, 64, 64);
    const std::size_t n = 50000;
    std::vector<double> counts(n);
    for_each_path(model, n, 17, 0, [&](std::size_t i, const JumpPath& p, bool) {
        counts[i] = double(p.events.size());
    });
    const MeanSe stats = mean_se(counts);
    CHECK(std::fabs(stats.mean - 1.0) <= 4.0 * stats.se);
    CHECK(model.tail_probability_bound() < 1e-60);
}

TEST_CASE("thinning sampler agrees with the skeleton sampler in law") {
    // same compound Poisson twice: constant-rate skeleton vs thinning
    auto direct = MultiJumpModel::compound_poisson(pm_marks(), {0.6, 0.4}, 1.0, 64, 64);
    auto thinned = MultiJumpModel::hazard_model(
        pm_marks(),
        [](double, std::size_t z, PathView) { return z == 0 ? 0.6 : 0.4; }, 1.4, 1.0, 64,
        64, false);
    const std::size_t n = 40000;
    std::vector<double> a(n), b(n);
    for_each_path(direct, n, 5, 0,
                  [&](std::size_t i, const JumpPath& p, bool) { a[i] = double(p.count(1.0, 0)); });
    for_each_path(thinned, n, 6, 0,
                  [&](std::size_t i, const JumpPath& p, bool) { b[i] = double(p.count(1.0, 0)); });
    const MeanSe sa = mean_se(a);
    const MeanSe sb = mean_se(b);
    CHECK(std::fabs(sa.mean - sb.mean) <=
          4.0 * std::sqrt(sa.se * sa.se + sb.se * sb.se));
}

TEST_CASE("constant payoff has the zero integrand") {
    auto model = MultiJumpModel::compound_poisson(pm_marks(), {0.5, 0.5}, 1.0, 64, 64);
    MarkStatPayoff constant{"c", {1.0, 1.0}, [](double) { return 3.25; }, 1.0};
    auto field = well_ordered_integrand(model, constant);
    JumpPath quiet{{}, 1.0};
    for (double t : {0.1, 0.5, 0.9})
        for (std::size_t z : {0, 1})
            CHECK(field(t, z, strict_past(quiet, t)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("count payoff on the compensated Poisson recovers H = 1") {
    auto model = MultiJumpModel::compound_poisson(pm_marks(), {0.5, 0.5}, 1.0, 64, 64);
    MarkovRepresentation rep(model, count_stat());
    CHECK(rep.m0() == doctest::Approx(1.0).epsilon(1e-10)); // E[N_1] = 1
    // M_t = N_t + (1 - t): value(t, n) = n + (1 - t)
    CHECK(rep.value(0.3, 2.0) == doctest::Approx(2.7).epsilon(1e-9));
    auto field = rep.integrand();
    JumpPath some{{{0.2, 0}, {0.6, 1}}, 1.0};
    for (double t : {0.1, 0.5, 0.95})
        for (std::size_t z : {0, 1}) {
            CHECK(std::fabs(field(t, z, strict_past(some, t)) - 1.0) <= 1e-8);
        }
}

TEST_CASE("interval consistency: DP field restricted to the first jump equals the "
          "single-jump integrand of the conditional first-jump law") {
    const double horizon = 1.0;
    auto model = MultiJumpModel::compound_poisson(pm_marks(), {0.7, 0.3}, horizon, 64, 512);
    MarkStatPayoff payoff{"sum", {1.0, -1.0}, [](double x) { return x * x; }, 1.0};
    MarkovRepresentation rep(model, payoff);

    // first-jump law: density lambda_z e^{-Lambda s} on [0,H], no jump mass e^{-Lambda H}
    const double lam0 = 0.7, lam1 = 0.3, total = 1.0;
    std::vector<DensityComponent> dens;
    dens.push_back({0, [=](double s) { return lam0 * std::exp(-total * s); }});
    dens.push_back({1, [=](double s) { return lam1 * std::exp(-total * s); }});
    auto law = std::make_shared<const JumpLaw>(pm_marks(), TimeGrid{horizon, 2048},
                                               std::move(dens), std::vector<LawAtom>{},
                                               std::exp(-total * horizon));

    // payoff of the embedded single-jump problem: the post-jump value
    PayoffFunctional h(
        [&rep](double s, std::size_t z) {
            return rep.value(s, z == 0 ? 1.0 : -1.0);
        },
        rep.value(horizon, 0.0)); // no first jump by H: X stays 0
    auto centered = center_payoff(h, *law);
    CHECK(centered.m0() == doctest::Approx(rep.m0()).epsilon(1e-8));
    auto g = chou_meyer_integrand(centered, law);

    JumpPath quiet{{}, horizon};
    for (double t : {0.1, 0.4, 0.8})
        for (std::size_t z : {0, 1})
            CHECK(std::fabs(g(t, z) - rep.integrand_at(t, 0.0, z)) <= 1e-7);
}

TEST_CASE("pasting: the DP field integral telescopes to the payoff pathwise") {
    auto model = MultiJumpModel::compound_poisson(pm_marks(), {0.8, 0.7}, 1.0, 64, 512);
    MarkStatPayoff payoff{"sumsq", {1.0, -1.0}, [](double x) { return x * x; }, 1.0};
    MarkovRepresentation rep(model, payoff);
    auto field = rep.integrand();
    auto path_payoff = payoff.as_path_payoff();

    double worst = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        CounterStream rng(404, i, stream_tag::events);
        const JumpPath path = model.sample_path(rng);
        const auto x = stochastic_integral(field, path, model.compensator(), model.grid());
        worst = std::max(worst,
                         std::fabs(x.terminal() - (path_payoff(path) - rep.m0())));
    }
    CHECK(worst <= 2e-2); // left-point hazard quadrature at K = 512
}

TEST_CASE("discrete-model payoffs are exact against the oracle") {
    auto model = DiscreteModel::from_table(pm_marks(), 1.0,
                                           {{0.25, 0.1}, {0.1, 0.3}, {0.2, 0.2}});
    PathPayoff payoff{"mix", [](const JumpPath& p) {
                          double v = 0.3;
                          for (const auto& e : p.events)
                              v += (e.mark == 0 ? 1.3 : -0.7) * std::cos(e.time);
                          return v * v;
                      }};
    auto field = well_ordered_integrand(model, payoff);
    EnumerationOracle oracle(model, payoff);
    const auto comp = model.compensator();
    const TimeGrid grid{1.0, 8};
    double worst = 0.0;
    oracle.for_each_leaf([&](std::span<const int> outcomes, double prob,
                             const JumpPath& path) {
        if (prob == 0.0) return;
        const auto x = stochastic_integral(field, path, comp, grid);
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            std::vector<int> prefix(outcomes.begin(), outcomes.begin() + long(k) + 1);
            worst = std::max(worst, std::fabs(oracle.value(prefix) - oracle.m0() -
                                              x.at(model.slot_time(k))));
        }
    });
    CHECK(worst <= 1e-10);
}

TEST_CASE("monotone truncation on nested filtrations, by enumeration") {
    // full model: two marks, independent history-free slots, so the
    // sub-filtration generated by mark-0 events satisfies the restriction
    // condition (the mark-0 compensator is the restricted one)
    const std::vector<std::vector<double>> table{
        {0.25, 0.1}, {0.1, 0.3}, {0.2, 0.2}, {0.15, 0.22}};
    auto full = DiscreteModel::from_table(pm_marks(), 1.0, table);

    MarkSpace sub_marks({{"plus", 1.0}});
    std::vector<std::vector<double>> sub_table;
    for (const auto& row : table) sub_table.push_back({row[0]});
    auto sub = DiscreteModel::from_table(sub_marks, 1.0, sub_table);

    auto skeleton = [](std::span<const int> full_prefix) {
        std::vector<int> s(full_prefix.size());
        for (std::size_t j = 0; j < full_prefix.size(); ++j)
            s[j] = full_prefix[j] == 1 ? 1 : 0;
        return s;
    };

    SUBCASE("a payoff of the sub-filtration has one integrand in both filtrations") {
        PathPayoff payoff{"mark0 only", [](const JumpPath& p) {
                              double v = 1.0;
                              for (const auto& e : p.events)
                                  if (e.mark == 0) v *= 1.5 + 0.1 * e.time;
                              return v;
                          }};
        EnumerationOracle full_oracle(full, payoff);
        EnumerationOracle sub_oracle(sub, payoff);
        CHECK(std::fabs(full_oracle.m0() - sub_oracle.m0()) <= 1e-12);

        double worst = 0.0;
        const std::size_t fullcount = 27; // prefixes of length 3
        std::vector<int> full_prefix(3);
        for (std::size_t fc = 0; fc < fullcount; ++fc) {
            std::size_t x = fc;
            for (std::size_t j = 0; j < 3; ++j) {
                full_prefix[j] = int(x % 3);
                x /= 3;
            }
            if (full_oracle.node_probability(full_prefix) == 0.0) continue;
            const auto sub_prefix = skeleton(full_prefix);
            // the full-filtration integrand on mark 0 matches the sub one,
            // and the mark-1 integrand vanishes: no extra information there
            worst = std::max(worst, std::fabs(full_oracle.integrand(full_prefix, 0) -
                                              sub_oracle.integrand(sub_prefix, 0)));
            worst = std::max(worst, std::fabs(full_oracle.integrand(full_prefix, 1)));
        }
        CHECK(worst <= 1e-10);
    }

    SUBCASE("general payoff: the sub integrand is the merged-outcome projection") {
        PathPayoff payoff{"mix", [](const JumpPath& p) {
                              double v = 1.0;
                              for (const auto& e : p.events)
                                  v *= (e.mark == 0 ? 1.5 : 0.6) + 0.1 * e.time;
                              return v;
                          }};
        EnumerationOracle full_oracle(full, payoff);

        // projected payoff: average over unobserved mark-1 outcomes
        PathPayoff projected{"projected", [&](const JumpPath& sub_path) {
            double total = 0.0;
            double mass = 0.0;
            full_oracle.for_each_leaf([&](std::span<const int> outcomes, double p,
                                          const JumpPath& full_path) {
                if (p == 0.0) return;
                std::size_t si = 0;
                bool ok = true;
                for (std::size_t k = 0; k < outcomes.size(); ++k) {
                    const bool full_has = outcomes[k] == 1;
                    const double t = full.slot_time(k);
                    const bool sub_has =
                        si < sub_path.events.size() && sub_path.events[si].time == t;
                    if (full_has != sub_has) ok = false;
                    if (sub_has) ++si;
                }
                if (!ok || si != sub_path.events.size()) return;
                total += p * payoff(full_path);
                mass += p;
            });
            return mass > 0.0 ? total / mass : 0.0;
        }};
        EnumerationOracle sub_oracle(sub, projected);
        CHECK(std::fabs(sub_oracle.m0() - full_oracle.m0()) <= 1e-12);

        // H^n(k|h_n) = sum_w [ b - (p_none a + p_1 c) / (p_none + p_1) ] where
        // (a, b, c) are the full-model child values and w the conditional
        // weights of compatible full prefixes
        double worst = 0.0;
        for (std::size_t k = 0; k < full.slots(); ++k) {
            const std::size_t count = std::size_t(1) << k;
            for (std::size_t code = 0; code < count; ++code) {
                std::vector<int> sub_prefix(k);
                for (std::size_t j = 0; j < k; ++j)
                    sub_prefix[j] = int((code >> j) & 1u);

                const auto probs = full.probabilities(k, {});
                const double p0 = probs[0];
                const double p1 = probs[1];
                const double pn = 1.0 - p0 - p1;

                double jump_branch = 0.0;
                double none_branch = 0.0;
                double mass = 0.0;
                const auto fullcount = std::size_t(std::pow(3.0, double(k)));
                std::vector<int> full_prefix(k);
                for (std::size_t fc = 0; fc < fullcount; ++fc) {
                    std::size_t x = fc;
                    bool compatible = true;
                    for (std::size_t j = 0; j < k; ++j) {
                        full_prefix[j] = int(x % 3);
                        x /= 3;
                        if ((full_prefix[j] == 1) != (sub_prefix[j] == 1))
                            compatible = false;
                    }
                    if (!compatible) continue;
                    const double p = full_oracle.node_probability(full_prefix);
                    if (p == 0.0) continue;
                    std::vector<int> child(full_prefix);
                    child.push_back(0);
                    const double a = full_oracle.value(child);
                    child.back() = 1;
                    const double b = full_oracle.value(child);
                    child.back() = 2;
                    const double c = full_oracle.value(child);
                    jump_branch += p * b;
                    none_branch += p * (pn * a + p1 * c) / (pn + p1);
                    mass += p;
                }
                const double expected = (jump_branch - none_branch) / mass;
                const double sub_h = sub_oracle.integrand(sub_prefix, 0);
                worst = std::max(worst, std::fabs(expected - sub_h));
            }
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("truncation study on the geometric family") {
    auto family = TruncationFamily::geometric(0.5, 0.5, 1.5, 1.5, 10, 1.0, 128);
    CHECK(family.level_rate(4) == doctest::Approx(3.0 * (std::pow(1.5, 4) - 1.0)));
    CHECK(family.tail_l2_infinite(2) ==
          doctest::Approx(std::pow(0.375, 3) / 0.625).epsilon(1e-12));

    SUBCASE("mark-sum residuals match the closed-form tail within 3 SE") {
        const std::vector<std::size_t> levels{2, 4};
        const auto study = truncation_study(family, StudyPayoffKind::mark_sum, levels, 10,
                                            30000, 2718);
        CHECK(study.cap_hits == 0);
        for (const auto& row : study.rows) {
            const double target_to_ref = family.tail_l2(row.level, 10);
            CHECK(std::fabs(row.residual - target_to_ref) <= 3.0 * row.residual_se);
            // the infinite-tail target differs only by the tiny reference tail
            CHECK(std::fabs(row.target - target_to_ref) < 1e-3);
        }
        // isometry route vs <mu~>-form route agree
        const auto& second = study.rows[1];
        CHECK(std::fabs(second.gap_prev - second.form_gap_prev) <=
              3.0 * std::sqrt(second.gap_prev_se * second.gap_prev_se +
                              second.form_gap_prev_se * second.form_gap_prev_se +
                              1e-18));
    }

    SUBCASE("already-finite family: all gaps vanish") {
        const std::vector<std::size_t> levels{10, 10};
        CHECK_THROWS_AS(truncation_study(family, StudyPayoffKind::mark_sum, levels, 10,
                                         100, 1),
                        ValidationError); // levels must strictly increase
        const std::vector<std::size_t> full{10};
        const auto study =
            truncation_study(family, StudyPayoffKind::mark_sum, full, 10, 500, 1);
        CHECK(study.rows[0].residual == doctest::Approx(0.0));
    }

    SUBCASE("indicator payoff: gaps decrease across levels") {
        const std::vector<std::size_t> levels{1, 2, 3};
        const auto study = truncation_study(family, StudyPayoffKind::indicator_positive,
                                            levels, 6, 30000, 99);
        CHECK(study.gaps_decreasing);
        CHECK(study.rows[1].gap_prev > study.rows[2].gap_prev);
        // form route within 3 SE of the isometry route
        for (std::size_t j = 1; j < study.rows.size(); ++j) {
            const auto& row = study.rows[j];
            CHECK(std::fabs(row.gap_prev - row.form_gap_prev) <=
                  3.0 * std::sqrt(row.gap_prev_se * row.gap_prev_se +
                                  row.form_gap_prev_se * row.form_gap_prev_se + 1e-18));
        }
    }
}

TEST_CASE("study integrands agree with the Markov recursion on a small level") {
    auto family = TruncationFamily::geometric(0.5, 0.5, 1.5, 1.5, 6, 1.0, 128);
    const std::size_t n = 3;
    auto model = family.level_model(n);

    SUBCASE("mark sum") {
        std::vector<double> weights;
        for (const auto& m : model.marks().marks()) weights.push_back(m.value);
        MarkStatPayoff payoff{"x", weights, [](double x) { return x; }, 0.5 * 0.5 * 0.5};
        MarkovRepresentation rep(model, payoff);
        auto closed = study_integrand(family, StudyPayoffKind::mark_sum, n);
        JumpPath quiet{{}, 1.0};
        for (double t : {0.2, 0.7})
            for (std::size_t z = 0; z < n; ++z)
                CHECK(std::fabs(closed(t, z, strict_past(quiet, t)) -
                                rep.integrand_at(t, 0.0, z)) <= 1e-9);
    }

    SUBCASE("positive indicator") {
        std::vector<double> weights;
        for (const auto& m : model.marks().marks()) weights.push_back(m.value);
        MarkStatPayoff payoff{"ind", weights,
                              [](double x) { return x > 1e-12 ? 1.0 : 0.0; },
                              0.5 * 0.5 * 0.5};
        MarkovRepresentation rep(model, payoff);
        auto closed = study_integrand(family, StudyPayoffKind::indicator_positive, n);
        JumpPath quiet{{}, 1.0};
        JumpPath jumped{{{0.1, 1}}, 1.0};
        for (double t : {0.3, 0.8})
            for (std::size_t z = 0; z < n; ++z) {
                CHECK(std::fabs(closed(t, z, strict_past(quiet, t)) -
                                rep.integrand_at(t, 0.0, z)) <= 1e-9);
                CHECK(std::fabs(closed(t, z, strict_past(jumped, t)) -
                                rep.integrand_at(t, 0.25, z)) <= 1e-9);
            }
    }
}

TEST_CASE("L2 projection by clipping: gaps shrink, representation holds") {
    // clip levels must sit above the payoff bulk for the gaps to be monotone
    auto family = TruncationFamily::geometric(0.25, 0.5, 1.5, 1.5, 2, 1.0, 256);
    auto model = family.level_model(2);
    const std::vector<double> clips{1.0, 2.0, 4.0, 8.0};
    const auto rows = l2_projection_test(model, clips, 8000, 40, 31);
    REQUIRE(rows.size() == 4);
    for (std::size_t j = 1; j < rows.size(); ++j) {
        if (j >= 2)
            CHECK(rows[j].gap_prev <=
                  rows[j - 1].gap_prev + 3.0 * (rows[j].gap_prev_se + 1e-12));
        CHECK(rows[j].representation_error <= 5e-2);
    }
    CHECK(rows.back().gap_prev < rows[1].gap_prev + 1e-12);
}

TEST_CASE("L2 projection on a discrete model resolves in finitely many steps") {
    auto model = DiscreteModel::from_table(pm_marks(), 1.0, {{0.3, 0.2}, {0.25, 0.15}});
    PathPayoff payoff{"quarters", [](const JumpPath& p) {
                          return 0.25 * double(p.events.size()) + 0.5;
                      }};
    const std::vector<int> bits{0, 1, 2, 6};
    const auto rows = l2_projection_test(model, payoff, bits);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1].gap_prev >= 0.0);
    CHECK(rows[3].gap_prev == doctest::Approx(0.0)); // 2 bits already resolve quarters
    for (const auto& r : rows) CHECK(r.representation_error <= 1e-12);
}

TEST_CASE("unsupported models are refused with the dedicated error") {
    auto hazard = MultiJumpModel::hazard_model(
        pm_marks(), [](double, std::size_t, PathView) { return 0.5; }, 1.0, 1.0, 16, 32,
        true);
    CHECK_THROWS_AS(well_ordered_integrand(hazard, count_stat()), ScenarioError);
}

TEST_CASE("cox: frozen W = 0 estimator has mean exactly 1 in expectation") {
    CoxParams p;
    p.n_levels = {50.0, 200.0};
    p.windows = {0.1};
    p.t = 0.5;
    p.num_paths = 4000;
    p.seed = 8;
    const auto frozen = cox_conditional_mean_check(p, /*zero_w=*/true);
    CHECK(frozen.target == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(frozen.mean_est - 1.0) <= 4.0 * frozen.se);
}

TEST_CASE("cox experiment: bounds, conditional mean, and monotone mse") {
    // small windows: the regime where the plain bound (its window factor
    // suppressed) is honest; the exact-centered bound holds in any regime
    CoxParams p;
    p.n_levels = {100.0, 1000.0};
    p.windows = {0.02, 0.01};
    p.t = 0.5;
    p.eps = 0.5;
    p.num_paths = 3000;
    p.seed = 21;
    const auto report = cox_counterexample_experiment(p);
    REQUIRE(report.cells.size() == 4);
    for (const auto& cell : report.cells) {
        CHECK(cell.exceed_prob <= cell.bound_plain + 3.0 * cell.exceed_se + 1e-12);
        CHECK(cell.exceed_prob_exact_center <= cell.bound_exact + 3.0 * cell.exceed_se + 1e-12);
        CHECK(cell.exact_factor ==
              doctest::Approx(2.0 * (std::exp(cell.h / 2) - 1.0) / cell.h));
    }
    CHECK(report.mse_monotone_in_n);
    // frozen-W conditional mean check within 4 SE
    CHECK(std::fabs(report.frozen.mean_est - report.frozen.target) <=
          4.0 * report.frozen.se);
}
