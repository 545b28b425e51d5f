#pragma once

#include "jumprep/law.hpp"
#include "jumprep/marks.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace jumprep {

/// A predictable point mass of the compensator. The mass may depend on the
/// strict past (an atom of a single-jump compensator dies once the jump has
/// happened); constant atoms leave mass_fn empty.
struct CompensatorAtom {
    double time = 0.0;
    std::size_t mark = 0;
    double mass = 0.0;
    std::function<double(PathView)> mass_fn;

    double eval(PathView past) const { return mass_fn ? mass_fn(past) : mass; }
};

/// mu_p in hazard/atom form: an absolutely continuous intensity per mark plus
/// predictable atoms. Hazard evaluation at t may read only events strictly
/// before t; integrators enforce this by passing truncated views.
class CompensatorSpec {
public:
    using Hazard = std::function<double(double, std::size_t, PathView)>;

    CompensatorSpec(std::size_t num_marks, Hazard hazard, std::vector<CompensatorAtom> atoms,
                    bool history_dependent, double hazard_bound = 0.0);

    std::size_t num_marks() const { return num_marks_; }
    bool has_density() const { return static_cast<bool>(hazard_); }
    double hazard(double t, std::size_t mark, PathView past) const;
    double hazard_total(double t, PathView past) const;
    std::span<const CompensatorAtom> atoms() const { return atoms_; }
    bool history_dependent() const { return history_dependent_; }
    /// Upper bound on the total hazard for thinning samplers; 0 = unknown.
    double hazard_bound() const { return hazard_bound_; }

    /// Total predictable atom mass at one time given the past.
    double atom_mass_at(double t, PathView past) const;

private:
    std::size_t num_marks_;
    Hazard hazard_;
    std::vector<CompensatorAtom> atoms_; // sorted by time
    bool history_dependent_;
    double hazard_bound_;
};

/// Compensator of the single-jump measure: hazard density(t,z)/F_{t-} and
/// atoms of mass m/F_{s-}, both alive only while no jump has happened and
/// only on {F > 0}; past the cutoff everything is 0 (the <mu~>-null region).
CompensatorSpec single_jump_compensator(std::shared_ptr<const JumpLaw> law);

} // namespace jumprep
