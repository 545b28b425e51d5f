#include "jumprep/compensator.hpp"

#include "jumprep/errors.hpp"

#include <cmath>

namespace jumprep {

namespace {
constexpr double kSurvivalFloor = 1e-14;
} // namespace

CompensatorSpec::CompensatorSpec(std::size_t num_marks, Hazard hazard,
                                 std::vector<CompensatorAtom> atoms, bool history_dependent,
                                 double hazard_bound)
    : num_marks_(num_marks),
      hazard_(std::move(hazard)),
      atoms_(std::move(atoms)),
      history_dependent_(history_dependent),
      hazard_bound_(hazard_bound) {
    if (num_marks_ == 0) throw ValidationError("CompensatorSpec needs at least one mark");
    double previous = -1.0;
    for (const auto& a : atoms_) {
        if (a.mark >= num_marks_) throw ValidationError("compensator atom on unknown mark");
        if (a.time < previous) throw ValidationError("compensator atoms must be time-sorted");
        if (!a.mass_fn && (a.mass < 0.0 || a.mass > 1.0))
            throw ValidationError("compensator atom mass must lie in [0,1]");
        previous = a.time;
    }
}

double CompensatorSpec::hazard(double t, std::size_t mark, PathView past) const {
    if (!hazard_) return 0.0;
    const double v = hazard_(t, mark, past);
    if (v < 0.0) throw ValidationError("negative hazard intensity");
    return v;
}

double CompensatorSpec::hazard_total(double t, PathView past) const {
    double v = 0.0;
    for (std::size_t z = 0; z < num_marks_; ++z) v += hazard(t, z, past);
    return v;
}

double CompensatorSpec::atom_mass_at(double t, PathView past) const {
    double m = 0.0;
    for (const auto& a : atoms_)
        if (a.time == t) m += a.eval(past);
    return m;
}

CompensatorSpec single_jump_compensator(std::shared_ptr<const JumpLaw> law) {
    if (!law) throw ValidationError("single_jump_compensator requires a law");

    auto hazard = [law](double t, std::size_t mark, PathView past) -> double {
        if (!past.empty()) return 0.0; // the jump already happened
        const double f_left = law->survival_all_left(t);
        if (f_left <= kSurvivalFloor) return 0.0; // <mu~>-null region beyond the cutoff
        return law->density(t, mark) / f_left;
    };

    std::vector<CompensatorAtom> atoms;
    atoms.reserve(law->atoms().size());
    for (const auto& a : law->atoms()) {
        CompensatorAtom ca;
        ca.time = a.time;
        ca.mark = a.mark;
        const double time = a.time;
        const double mass = a.mass;
        ca.mass_fn = [law, time, mass](PathView past) -> double {
            if (!past.empty()) return 0.0;
            const double f_left = law->survival_all_left(time);
            if (f_left <= kSurvivalFloor) return 0.0;
            return mass / f_left;
        };
        atoms.push_back(std::move(ca));
    }

    return CompensatorSpec(law->marks().size(), std::move(hazard), std::move(atoms),
                           /*history_dependent=*/true, /*hazard_bound=*/0.0);
}

} // namespace jumprep
