#include "doctest.h"

#include "jumprep/calculus.hpp"
#include "jumprep/errors.hpp"
#include "jumprep/multi_jump.hpp"
#include "jumprep/rng.hpp"
#include "jumprep/single_jump.hpp"

#include <cmath>
#include <memory>
#include <vector>

using namespace jumprep;

namespace {

MarkSpace one_mark() { return MarkSpace({{"a", 1.0}}); }
MarkSpace two_marks() { return MarkSpace({{"up", 1.0}, {"down", -1.0}}); }

std::shared_ptr<const JumpLaw> exponential_law(double rate, double t_max,
                                               std::size_t steps = 2048) {
    std::vector<DensityComponent> dens;
    dens.push_back({0, [rate](double t) { return rate * std::exp(-rate * t); }});
    return std::make_shared<const JumpLaw>(one_mark(), TimeGrid{t_max, steps},
                                           std::move(dens), std::vector<LawAtom>{},
                                           std::exp(-rate * t_max));
}

PayoffFunctional indicator_before(double threshold) {
    return PayoffFunctional(
        [threshold](double t, std::size_t) { return t <= threshold ? 1.0 : 0.0; }, 0.0);
}

} // namespace

TEST_CASE("center_payoff: constants collapse to zero") {
    auto law = exponential_law(1.0, 2.0);
    PayoffFunctional five([](double, std::size_t) { return 5.0; }, 5.0);
    auto c = center_payoff(five, *law);
    CHECK(c.m0() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(c(0.3, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.at_infinity() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("center_payoff: exponential indicator has mean 1 - e^{-1}") {
    auto law = exponential_law(1.0, 2.0);
    auto c = center_payoff(indicator_before(1.0), *law);
    CHECK(c.m0() == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("center_payoff mean matches enumeration on a discrete law to 1e-12") {
    std::vector<std::vector<double>> masses{{0.10, 0.07}, {0.22, 0.03}, {0.08, 0.18}};
    auto sc = make_single_jump_discrete(two_marks(), masses, 1.0);
    PayoffFunctional h(
        [](double t, std::size_t z) { return std::sin(9.0 * t) + (z == 0 ? 0.4 : -1.1); },
        0.25);
    EnumerationOracle oracle(sc.model, terminal_payoff(h));
    const double mean = payoff_mean(h, *sc.law);
    CHECK(std::fabs(mean - oracle.m0()) <= 1e-12);
}

TEST_CASE("conditional expectation path: revealed and unrevealed branches") {
    auto law = exponential_law(1.0, 2.0);
    auto c = center_payoff(indicator_before(1.0), *law);

    SUBCASE("after the jump the path sits at the revealed value") {
        JumpPath path{{{0.4, 0}}, 1.5};
        const auto m = conditional_expectation_path(c, law, path);
        CHECK(m.at(0.4) == doctest::Approx(c(0.4, 0)).epsilon(1e-12));
        CHECK(m.at(1.2) == doctest::Approx(c(0.4, 0)).epsilon(1e-12));
    }

    SUBCASE("before the jump: -(1/F_t) int h dnu; frozen value at 0.5") {
        JumpPath path{{{1.4, 0}}, 1.5};
        const auto m = conditional_expectation_path(c, law, path);
        CHECK(m.at(0.5) ==
              doctest::Approx(std::exp(-1.0) - std::exp(-0.5)).epsilon(1e-9));
        CHECK(m.at(0.5) == doctest::Approx(-0.2387).epsilon(1e-3));
        // centered: M_0 = 0
        CHECK(m.at(0.0) == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("no-jump path past the cutoff raises the impossible-path error") {
        std::vector<DensityComponent> dens;
        dens.push_back({0, [](double) { return 1.0; }});
        auto uniform = std::make_shared<const JumpLaw>(
            one_mark(), TimeGrid{1.0, 256}, std::move(dens), std::vector<LawAtom>{}, 0.0);
        auto cu = center_payoff(indicator_before(0.5), *uniform);
        JumpPath no_jump{{}, 1.0};
        CHECK_THROWS_AS(conditional_expectation_path(cu, uniform, no_jump),
                        DiagnosticError);
    }
}

TEST_CASE("integrand: centered-zero payoff gives the zero field") {
    auto law = exponential_law(1.0, 2.0);
    PayoffFunctional five([](double, std::size_t) { return 5.0; }, 5.0);
    auto g = chou_meyer_integrand(center_payoff(five, *law), law);
    for (double t : {0.1, 0.7, 1.9}) CHECK(g(t, 0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("integrand: exponential indicator gives g(t) = e^{t-1}, 0 after resolve") {
    auto law = exponential_law(1.0, 2.0);
    auto c = center_payoff(indicator_before(1.0), *law);
    auto g = chou_meyer_integrand(c, law);
    CHECK(g(0.5, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
    CHECK(g(0.5, 0) == doctest::Approx(0.6065).epsilon(1e-3));
    for (double t : {0.0, 0.25, 0.75, 1.0})
        CHECK(g(t, 0) == doctest::Approx(std::exp(t - 1.0)).epsilon(1e-9));
    for (double t : {1.2, 1.8}) CHECK(g(t, 0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("integrand matches the oracle jump differences on a discrete law") {
    std::vector<std::vector<double>> masses{{0.10, 0.07}, {0.22, 0.03}, {0.08, 0.18},
                                            {0.02, 0.11}};
    auto sc = make_single_jump_discrete(two_marks(), masses, 1.0);
    PayoffFunctional h(
        [](double t, std::size_t z) { return std::cos(7.0 * t) * (z == 0 ? 1.0 : -2.0); },
        -0.3);
    auto c = center_payoff(h, *sc.law);
    auto g = chou_meyer_integrand(c, sc.law);

    EnumerationOracle oracle(sc.model, terminal_payoff(h));
    std::vector<int> quiet;
    for (std::size_t k = 0; k < sc.model.slots(); ++k) {
        quiet.assign(k, 0);
        const double t = sc.model.slot_time(k);
        for (std::size_t z = 0; z < 2; ++z)
            CHECK(std::fabs(g(t, z) - oracle.integrand(quiet, z)) <= 1e-12);
    }
}

TEST_CASE("representation exactness on randomized discrete single-jump laws") {
    CounterStream gen(314159, 0, stream_tag::scramble);
    double worst = 0.0;
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t K = 2 + gen.next_u32() % 4;       // slots
        const std::size_t m = 1 + gen.next_u32() % 3;       // marks
        std::vector<Mark> marks;
        for (std::size_t z = 0; z < m; ++z)
            marks.push_back({"m" + std::to_string(z), double(z + 1)});
        std::vector<std::vector<double>> masses(K, std::vector<double>(m));
        double budget = 0.95;
        for (auto& row : masses)
            for (double& x : row) {
                x = budget * gen.uniform01() / double(K * m);
                budget -= x;
            }
        auto sc = make_single_jump_discrete(MarkSpace(marks), masses, 1.0);

        const std::uint64_t salt = gen.next_u64();
        PayoffFunctional h(
            [salt](double t, std::size_t z) {
                const double u = std::sin(double(salt % 97) * t + 3.1 * double(z));
                return 2.0 * u - 0.5;
            },
            double(salt % 13) / 7.0 - 1.0);

        auto c = center_payoff(h, *sc.law);
        auto g = chou_meyer_integrand(c, sc.law);
        EnumerationOracle oracle(sc.model, terminal_payoff(h));
        const auto comp = single_jump_compensator(sc.law);
        const TimeGrid grid{1.0, 4};

        oracle.for_each_leaf([&](std::span<const int> outcomes, double prob,
                                 const JumpPath& path) {
            if (prob == 0.0) return; // not a path of the single-jump model
            const auto x = stochastic_integral(g, path, comp, grid);
            for (std::size_t k = 0; k < outcomes.size(); ++k) {
                std::vector<int> prefix(outcomes.begin(),
                                        outcomes.begin() + long(k) + 1);
                const double m_t = oracle.value(prefix);
                const double t = sc.model.slot_time(k);
                worst = std::max(worst,
                                 std::fabs(m_t - oracle.m0() - x.at(t)));
            }
        });
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("integrability bound holds; frozen trivial case") {
    auto law = exponential_law(1.0, 2.0);

    SUBCASE("centered-zero payoff: 0 <= 0") {
        PayoffFunctional five([](double, std::size_t) { return 5.0; }, 5.0);
        auto bc = integrability_bound_check(center_payoff(five, *law), law, 1.0);
        CHECK(bc.lhs == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(bc.holds);
    }

    SUBCASE("indicator payoff at t = 1") {
        auto bc = integrability_bound_check(indicator_before(1.0), law, 1.0);
        CHECK(bc.holds);
        CHECK(bc.lhs > 0.0);
        CHECK(bc.lhs <= bc.rhs);
    }

    SUBCASE("past the cutoff the check refuses") {
        std::vector<DensityComponent> dens;
        dens.push_back({0, [](double) { return 1.0; }});
        auto uniform = std::make_shared<const JumpLaw>(
            one_mark(), TimeGrid{1.0, 256}, std::move(dens), std::vector<LawAtom>{}, 0.0);
        CHECK_THROWS_AS(integrability_bound_check(indicator_before(0.5), uniform, 1.0),
                        DiagnosticError);
    }
}

TEST_CASE("integrability bound sweep over random discrete laws") {
    CounterStream gen(777, 0, stream_tag::scramble);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t K = 2 + gen.next_u32() % 3;
        std::vector<std::vector<double>> masses(K, std::vector<double>(2));
        for (auto& row : masses)
            for (double& x : row) x = 0.4 * gen.uniform01() / double(K);
        auto sc = make_single_jump_discrete(two_marks(), masses, 1.0);
        const double a = 2.0 * gen.uniform01() - 1.0;
        const double b = 2.0 * gen.uniform01() - 1.0;
        PayoffFunctional h(
            [a, b](double t, std::size_t z) { return a * t + (z == 0 ? b : -b); },
            a - b);
        const double t = 0.25 + 0.75 * gen.uniform01();
        if (sc.law->survival_all(t) <= 1e-12) continue;
        const auto bc = integrability_bound_check(h, sc.law, t);
        CHECK(bc.holds);
    }
}

TEST_CASE("uniqueness gap") {
    auto law = exponential_law(1.0, 2.0);
    auto c = center_payoff(indicator_before(1.0), *law);
    auto g = chou_meyer_integrand(c, law);

    SUBCASE("identical fields have zero gap") {
        CHECK(uniqueness_gap(g, g, *law, 1.5) == doctest::Approx(0.0));
    }

    SUBCASE("changes beyond the cutoff are <mu~>-null") {
        // uniform law with cutoff 1: perturb only past the cutoff
        std::vector<DensityComponent> dens;
        dens.push_back({0, [](double) { return 1.0; }});
        auto uniform = std::make_shared<const JumpLaw>(
            one_mark(), TimeGrid{1.0, 512}, std::move(dens), std::vector<LawAtom>{}, 0.0);
        auto cu = center_payoff(indicator_before(0.5), *uniform);
        auto gu = chou_meyer_integrand(cu, uniform);
        auto perturbed = PredictableField::deterministic([gu](double t, std::size_t z) {
            return gu(t, z) + (t > 1.0 ? 3.0 : 0.0);
        });
        CHECK(uniqueness_gap(gu, perturbed, *uniform, 2.0) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("g + 1 on a charged region has the closed-form gap") {
        auto shifted = PredictableField::deterministic(
            [g](double t, std::size_t z) { return g(t, z) + 1.0; });
        // gap = nu(]0, 1.5] x E) = 1 - e^{-1.5} for the exponential density
        CHECK(uniqueness_gap(g, shifted, *law, 1.5) ==
              doctest::Approx(1.0 - std::exp(-1.5)).epsilon(1e-9));
    }
}

TEST_CASE("MC replication: mean within 3 SE, left-point quadrature bias visible") {
    auto law = exponential_law(1.0, 2.0);
    auto c = center_payoff(indicator_before(1.0), *law);
    auto g = chou_meyer_integrand(c, law);
    const auto rep = single_jump_replication(c, g, law, 0.7, 512, 20000, 4242);
    CHECK(std::fabs(rep.mean) <= 3.0 * rep.se);
    CHECK(rep.rms < 1.0);
}

TEST_CASE("pathwise representation error on simulated paths decreases when K doubles") {
    auto law = exponential_law(1.0, 2.0, 1024);
    auto c = center_payoff(indicator_before(1.0), *law);
    auto g = chou_meyer_integrand(c, law);
    const auto comp = single_jump_compensator(law);

    auto sup_error = [&](std::size_t steps) {
        const TimeGrid grid{1.5, steps};
        double total = 0.0;
        const int n = 64;
        for (int i = 0; i < n; ++i) {
            CounterStream rng(5150, std::uint64_t(i), stream_tag::events);
            JumpPath path{{}, 1.5};
            const JumpEvent e = law->sample(rng);
            if (e.is_jump() && e.time <= 1.5) path.events.push_back(e);
            const auto m = conditional_expectation_path(c, law, path);
            const auto x = stochastic_integral(g, path, comp, grid);
            double sup = 0.0;
            for (std::size_t j = 0; j <= grid.steps; ++j) {
                const double t = grid.node(j);
                sup = std::max(sup, std::fabs(m.at(t) - x.at(t)));
            }
            total += sup;
        }
        return total / n;
    };

    const double coarse = sup_error(128);
    const double fine = sup_error(256);
    CHECK(fine < coarse);
    CHECK(fine / coarse == doctest::Approx(0.5).epsilon(0.35));
}

TEST_CASE("fault injection: a tampered integrand breaks pathwise exactness") {
    auto law = exponential_law(1.0, 2.0);
    auto c = center_payoff(indicator_before(1.0), *law);
    auto g = chou_meyer_integrand(c, law);
    auto bad = PredictableField::deterministic(
        [g](double t, std::size_t z) { return g(t, z) + 0.1; });
    const auto comp = single_jump_compensator(law);
    const TimeGrid grid{1.5, 512};

    auto sup_error = [&](const PredictableField& field) {
        double worst = 0.0;
        for (int i = 0; i < 32; ++i) {
            CounterStream rng(88, std::uint64_t(i), stream_tag::events);
            JumpPath path{{}, 1.5};
            const JumpEvent e = law->sample(rng);
            if (e.is_jump() && e.time <= 1.5) path.events.push_back(e);
            const auto m = conditional_expectation_path(c, law, path);
            const auto x = stochastic_integral(field, path, comp, grid);
            for (std::size_t j = 0; j <= grid.steps; j += 16) {
                const double t = grid.node(j);
                worst = std::max(worst, std::fabs(m.at(t) - x.at(t)));
            }
        }
        return worst;
    };

    CHECK(sup_error(g) <= 5e-3);
    CHECK(sup_error(bad) > 2e-2);
}
