#include "doctest.h"

#include "jumprep/compensator.hpp"
#include "jumprep/errors.hpp"
#include "jumprep/law.hpp"
#include "jumprep/marks.hpp"
#include "jumprep/rng.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

using namespace jumprep;

namespace {

MarkSpace one_mark() { return MarkSpace({{"a", 1.0}}); }

// exponential(rate) truncated at t_max; leftover mass parked at infinity so
// F_t = e^{-rate t} exactly on [0, t_max]
std::shared_ptr<const JumpLaw> exponential_law(double rate, double t_max,
                                               std::size_t steps = 2048) {
    std::vector<DensityComponent> dens;
    dens.push_back({0, [rate](double t) { return rate * std::exp(-rate * t); }});
    return std::make_shared<const JumpLaw>(one_mark(), TimeGrid{t_max, steps},
                                           std::move(dens), std::vector<LawAtom>{},
                                           std::exp(-rate * t_max));
}

} // namespace

TEST_CASE("survival: total mass and closed forms") {
    auto law = exponential_law(1.0, 2.0);
    CHECK(law->survival_all(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(law->survival_all(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(law->survival_all(1.3) == doctest::Approx(std::exp(-1.3)).epsilon(1e-10));
    CHECK(std::isinf(law->cutoff()));

    std::vector<std::string> labels{"a"};
    CHECK(survival(*law, std::log(2.0), labels) == doctest::Approx(0.5).epsilon(1e-10));
    std::vector<std::string> bad{"zz"};
    CHECK_THROWS_AS(survival(*law, 0.1, bad), ValidationError);
}

TEST_CASE("survival with a deterministic atom: right limits and cutoff") {
    // single atom (time 2, mark a, mass 1)
    auto law = std::make_shared<const JumpLaw>(one_mark(), TimeGrid{2.0, 64},
                                               std::vector<DensityComponent>{},
                                               std::vector<LawAtom>{{2.0, 0, 1.0}}, 0.0);
    CHECK(law->survival_all(1.9999) == doctest::Approx(1.0));
    CHECK(law->survival_all(2.0) == doctest::Approx(0.0));
    CHECK(law->survival_all_left(2.0) == doctest::Approx(1.0));
    CHECK(law->cutoff() == doctest::Approx(2.0));
}

TEST_CASE("mass balance is validated at construction") {
    std::vector<DensityComponent> dens;
    dens.push_back({0, [](double) { return 1.0; }}); // mass 2 on [0,2]
    CHECK_THROWS_AS(JumpLaw(one_mark(), TimeGrid{2.0, 64}, std::move(dens), {}, 0.0),
                    ValidationError);
}

TEST_CASE("window identity: F_0 - F_t equals the mass of ]0,t]") {
    auto law = exponential_law(0.7, 3.0, 512);
    for (double t : {0.25, 1.0, 2.5}) {
        const double lhs = law->survival_all(0.0) - law->survival_all(t);
        CHECK(lhs == doctest::Approx(law->mass_upto(t)).epsilon(1e-12));
    }
}

TEST_CASE("validate_path reports the first violation") {
    const MarkSpace marks({{"a", 1.0}, {"b", -1.0}});

    JumpPath empty;
    CHECK(!validate_path(empty, marks));

    JumpPath dup{{{0.3, 0}, {0.3, 1}}, 1.0};
    auto v = validate_path(dup, marks);
    REQUIRE(v.has_value());
    CHECK(v->kind == PathViolation::Kind::duplicate_time);
    CHECK(v->event_index == 1);

    JumpPath ok{{{0.2, 0}, {0.9, 1}}, 1.0};
    CHECK(!validate_path(ok, marks));

    JumpPath late{{{1.5, 0}}, 1.0};
    CHECK(validate_path(late, marks)->kind == PathViolation::Kind::beyond_horizon);

    JumpPath neg{{{-0.1, 0}}, 1.0};
    CHECK(validate_path(neg, marks)->kind == PathViolation::Kind::negative_time);
}

TEST_CASE("single-jump compensator: exponential law has constant hazard") {
    auto law = exponential_law(2.5, 2.0);
    auto comp = single_jump_compensator(law);
    JumpPath quiet;
    for (double t : {0.1, 0.7, 1.5})
        CHECK(comp.hazard(t, 0, strict_past(quiet, t)) == doctest::Approx(2.5).epsilon(1e-9));

    // hazard dies after the jump
    JumpPath jumped{{{0.5, 0}}, 2.0};
    CHECK(comp.hazard(0.7, 0, strict_past(jumped, 0.7)) == 0.0);
    // and is untouched before it
    CHECK(comp.hazard(0.3, 0, strict_past(jumped, 0.3)) ==
          doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("single-jump compensator: uniform target hazard 1/(1-s)") {
    std::vector<DensityComponent> dens;
    dens.push_back({0, [](double) { return 1.0; }});
    auto law = std::make_shared<const JumpLaw>(one_mark(), TimeGrid{1.0, 1024},
                                               std::move(dens), std::vector<LawAtom>{}, 0.0);
    auto comp = single_jump_compensator(law);
    JumpPath quiet;
    for (double s : {0.1, 0.5, 0.9})
        CHECK(comp.hazard(s, 0, strict_past(quiet, s)) ==
              doctest::Approx(1.0 / (1.0 - s)).epsilon(1e-8));
    // past the cutoff the hazard is reported as zero, not a division failure
    CHECK(law->cutoff() == doctest::Approx(1.0));
    CHECK(comp.hazard(1.0 + 1e-9, 0, strict_past(quiet, 1.1)) == 0.0);
}

TEST_CASE("single-jump compensator: certain predictable jump becomes a unit atom") {
    auto law = std::make_shared<const JumpLaw>(one_mark(), TimeGrid{2.0, 64},
                                               std::vector<DensityComponent>{},
                                               std::vector<LawAtom>{{1.5, 0, 1.0}}, 0.0);
    auto comp = single_jump_compensator(law);
    REQUIRE(comp.atoms().size() == 1);
    JumpPath quiet;
    CHECK(comp.atoms()[0].eval(strict_past(quiet, 1.5)) == doctest::Approx(1.0));
}

TEST_CASE("compensator predictability: the future cannot move the hazard") {
    auto law = exponential_law(1.0, 2.0);
    auto comp = single_jump_compensator(law);
    JumpPath later{{{1.2, 0}}, 2.0};
    JumpPath never;
    for (double t : {0.2, 0.8, 1.1}) {
        CHECK(comp.hazard(t, 0, strict_past(later, t)) ==
              comp.hazard(t, 0, strict_past(never, t)));
    }
}

TEST_CASE("inverse-CDF sampling reproduces the law within 4 standard errors") {
    // mixed law: density 0.5 * exp on [0,2], atom (0.8, a, 0.2), rest at infinity
    std::vector<DensityComponent> dens;
    dens.push_back({0, [](double t) { return 0.5 * std::exp(-t); }});
    const double density_mass = 0.5 * (1.0 - std::exp(-2.0));
    const double atom_mass = 0.2;
    auto law = std::make_shared<const JumpLaw>(
        one_mark(), TimeGrid{2.0, 512}, std::move(dens),
        std::vector<LawAtom>{{0.8, 0, atom_mass}}, 1.0 - density_mass - atom_mass);

    const std::size_t n = 200000;
    std::size_t hit_atom = 0, hit_none = 0, hit_early = 0;
    CounterStream rng(99, 0, stream_tag::events);
    for (std::size_t i = 0; i < n; ++i) {
        const JumpEvent e = law->sample(rng);
        if (!e.is_jump())
            ++hit_none;
        else if (e.time == 0.8)
            ++hit_atom;
        else if (e.time <= 0.5)
            ++hit_early;
    }
    auto close = [n](double phat, double p) {
        const double se = std::sqrt(p * (1.0 - p) / double(n));
        return std::fabs(phat - p) <= 4.0 * se;
    };
    CHECK(close(hit_atom / double(n), atom_mass));
    CHECK(close(hit_none / double(n), law->mass_at_infinity()));
    CHECK(close(hit_early / double(n), 0.5 * (1.0 - std::exp(-0.5))));
}
