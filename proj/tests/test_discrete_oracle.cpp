#include "doctest.h"

#include "jumprep/calculus.hpp"
#include "jumprep/errors.hpp"
#include "jumprep/multi_jump.hpp"
#include "jumprep/rng.hpp"

#include <cmath>
#include <vector>

using namespace jumprep;

namespace {

MarkSpace one_mark() { return MarkSpace({{"a", 1.0}}); }
MarkSpace two_marks() { return MarkSpace({{"up", 1.0}, {"down", -1.0}}); }

PathPayoff count_payoff() {
    return PathPayoff{"count",
                      [](const JumpPath& p) { return double(p.events.size()); }};
}

// deterministic pseudo-random leaf payoff, reproducible across runs
PathPayoff hash_payoff(std::uint64_t salt) {
    return PathPayoff{"hash", [salt](const JumpPath& p) {
                          std::uint64_t h = salt * 0x9E3779B97F4A7C15ull + 1;
                          for (const auto& e : p.events) {
                              h ^= std::uint64_t(e.mark + 1) * 0xBF58476D1CE4E5B9ull;
                              h ^= std::uint64_t(e.time * 4096.0);
                              h *= 0x94D049BB133111EBull;
                          }
                          return double(h % 1000) / 500.0 - 1.0;
                      }};
}

} // namespace

TEST_CASE("Bernoulli slot by hand: M0, integrand, predictable atom") {
    auto model = DiscreteModel::from_table(one_mark(), 1.0, {{0.5}});
    EnumerationOracle oracle(model, PathPayoff{"indicator", [](const JumpPath& p) {
                                                   return p.events.empty() ? 0.0 : 1.0;
                                               }});
    CHECK(oracle.m0() == doctest::Approx(0.5));
    CHECK(oracle.integrand({}, 0) == doctest::Approx(1.0));

    const auto comp = model.compensator();
    JumpPath quiet{{}, 1.0};
    const auto qv = predictable_qv(comp, quiet, TimeGrid{1.0, 4});
    CHECK(qv.eval_all(1.0) == doctest::Approx(0.25));
}

TEST_CASE("deterministic payoff has zero integrand at every node") {
    auto model = DiscreteModel::from_table(two_marks(), 1.0,
                                           {{0.2, 0.1}, {0.1, 0.2}, {0.3, 0.1}});
    EnumerationOracle oracle(model,
                             PathPayoff{"constant", [](const JumpPath&) { return 7.0; }});
    CHECK(oracle.m0() == doctest::Approx(7.0));
    std::vector<int> prefix;
    for (int a : {0, 1, 2}) {
        prefix = {a};
        for (std::size_t z = 0; z < 2; ++z) {
            CHECK(oracle.integrand({}, z) == doctest::Approx(0.0).epsilon(1e-15));
            CHECK(oracle.integrand(prefix, z) == doctest::Approx(0.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("K=6, two marks: 729 leaves, probabilities sum to 1, identity holds") {
    auto model = DiscreteModel::from_table(
        two_marks(), 1.0,
        {{0.2, 0.1}, {0.1, 0.2}, {0.3, 0.1}, {0.05, 0.25}, {0.15, 0.15}, {0.4, 0.1}});
    CHECK(model.leaf_count() == doctest::Approx(729.0));
    EnumerationOracle oracle(model, hash_payoff(11));

    double total_prob = 0.0;
    std::size_t leaves = 0;
    oracle.for_each_leaf([&](std::span<const int>, double p, const JumpPath&) {
        total_prob += p;
        ++leaves;
    });
    CHECK(leaves == 729);
    CHECK(total_prob == doctest::Approx(1.0).epsilon(1e-13));

    // exact zero conditional mean of martingale increments at every node
    CHECK(oracle.representation_residual() <= 1e-12);
}

TEST_CASE("history-dependent model: intensity doubles after the first jump") {
    auto probs = [](std::size_t, std::span<const int> history, std::span<double> out) {
        bool jumped = false;
        for (int c : history) jumped = jumped || c != 0;
        out[0] = jumped ? 0.30 : 0.15;
        out[1] = jumped ? 0.10 : 0.05;
    };
    DiscreteModel model(two_marks(), 4, 1.0, probs, true);
    EnumerationOracle oracle(model, hash_payoff(5));
    CHECK(oracle.representation_residual() <= 1e-12);

    // pathwise representation via the generic integrator on every leaf
    const auto comp = model.compensator();
    const auto field = oracle.integrand_field();
    const TimeGrid grid{1.0, 8};
    double worst = 0.0;
    oracle.for_each_leaf([&](std::span<const int> outcomes, double, const JumpPath& path) {
        const auto x = stochastic_integral(field, path, comp, grid);
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            const double t = model.slot_time(k);
            std::vector<int> prefix(outcomes.begin(),
                                    outcomes.begin() + static_cast<long>(k) + 1);
            const double m_t = oracle.value(prefix);
            worst = std::max(worst, std::fabs(m_t - oracle.m0() - x.at(t)));
        }
    });
    CHECK(worst <= 1e-10);
}

TEST_CASE("exact isometry on the discrete tree matches the variance form to 1e-12") {
    auto model = DiscreteModel::from_table(
        two_marks(), 1.0, {{0.2, 0.1}, {0.1, 0.2}, {0.3, 0.1}, {0.05, 0.25}});
    EnumerationOracle oracle(model, count_payoff());
    auto w = PredictableField::deterministic(
        [](double t, std::size_t z) { return std::cos(5.0 * t) + 0.7 * double(z); });
    const auto iso = oracle.isometry(w);
    CHECK(std::fabs(iso.lhs - iso.rhs) <= 1e-12);

    // also for the oracle's own history-dependent integrand
    const auto field = oracle.integrand_field();
    const auto iso2 = oracle.isometry(field);
    CHECK(std::fabs(iso2.lhs - iso2.rhs) <= 1e-12);
}

TEST_CASE("tree size guard") {
    auto model = DiscreteModel::from_table(
        MarkSpace({{"a", 1.0}, {"b", 2.0}, {"c", 3.0}, {"d", 4.0}}), 1.0,
        std::vector<std::vector<double>>(13, {0.1, 0.1, 0.1, 0.1}));
    CHECK_THROWS_AS(EnumerationOracle(model, count_payoff()), ScenarioError);
}

TEST_CASE("single-jump discrete scenario: law and model tell one story") {
    const MarkSpace marks = two_marks();
    std::vector<std::vector<double>> masses{{0.15, 0.05}, {0.20, 0.10}, {0.05, 0.25}};
    auto scenario = make_single_jump_discrete(marks, masses, 1.0);

    CHECK(scenario.law->mass_at_infinity() == doctest::Approx(0.2));
    const double t1 = scenario.model.slot_time(1);
    CHECK(scenario.law->survival_all_left(t1) == doctest::Approx(0.8));

    std::vector<int> quiet{0};
    const auto p = scenario.model.probabilities(1, quiet);
    CHECK(p[0] == doctest::Approx(0.20 / 0.8).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.10 / 0.8).epsilon(1e-14));

    std::vector<int> jumped{1};
    const auto q = scenario.model.probabilities(1, jumped);
    CHECK(q[0] == 0.0);
    CHECK(q[1] == 0.0);

    // the single-jump compensator's atoms agree with the model's probabilities
    const auto comp = single_jump_compensator(scenario.law);
    JumpPath quiet_path{{}, 1.0};
    double atom_mass = 0.0;
    for (const auto& a : comp.atoms())
        if (a.time == t1 && a.mark == 0) atom_mass = a.eval(strict_past(quiet_path, t1));
    CHECK(atom_mass == doctest::Approx(0.25).epsilon(1e-14));
}
