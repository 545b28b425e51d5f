#pragma once

#include "jumprep/grid.hpp"
#include "jumprep/marks.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace jumprep {

class CounterStream;

/// Absolutely continuous part of a jump law on one mark. The intensity is a
/// function so running integrals can be taken with Gauss panels instead of a
/// sampled table.
struct DensityComponent {
    std::size_t mark = 0;
    std::function<double(double)> intensity;
};

struct LawAtom {
    double time = 0.0;
    std::size_t mark = 0;
    double mass = 0.0;
};

/// The law nu of a single jump (T, Z): a density part per mark on [0, t_max],
/// point masses, and the probability that no jump ever happens. Total mass
/// must be 1 within 1e-12. Immutable after construction.
class JumpLaw {
public:
    JumpLaw(MarkSpace marks, TimeGrid grid, std::vector<DensityComponent> density,
            std::vector<LawAtom> atoms, double mass_at_infinity);

    const MarkSpace& marks() const { return marks_; }
    const TimeGrid& grid() const { return grid_; }
    double mass_at_infinity() const { return mass_at_infinity_; }
    std::span<const LawAtom> atoms() const { return atoms_; }

    double density(double t, std::size_t mark) const;
    double density_total(double t) const;

    /// nu(]0,t] x {mark}): density mass plus atoms with time <= t.
    double mass_upto(double t, std::size_t mark) const;
    double mass_upto(double t) const;

    /// F^A_t = P(T > t, Z in A). Pass include_no_jump to count {T = infinity}
    /// (always counted by the A = whole-space overloads below, so that
    /// survival over "all marks" is the curve F_t used by hazards and g).
    double survival(double t, std::span<const std::size_t> mark_subset,
                    bool include_no_jump = false) const;
    /// Left limit F^A_{t-} = P(T >= t, Z in A).
    double survival_left(double t, std::span<const std::size_t> mark_subset,
                         bool include_no_jump = false) const;
    double survival_all(double t) const;      // F_t
    double survival_all_left(double t) const; // F_{t-}

    /// c = inf{t : F_t = 0}; +infinity when F never vanishes.
    double cutoff() const { return cutoff_; }

    /// Integral of f over ]0,t] x marks against nu (Gauss panels + exact atoms).
    double integrate(const std::function<double(double, std::size_t)>& f, double t) const;
    double integrate(const std::function<double(double, std::size_t)>& f) const;

    /// Running table of the same integral at grid nodes, atoms included.
    std::vector<double> cumulative(const std::function<double(double, std::size_t)>& f) const;
    double cumulative_at(const std::vector<double>& table,
                         const std::function<double(double, std::size_t)>& f, double t) const;

    /// Draw (T, Z) by component choice + inverse CDF; JumpEvent::none() when
    /// the no-jump mass is hit.
    JumpEvent sample(CounterStream& rng) const;

private:
    MarkSpace marks_;
    TimeGrid grid_;
    std::vector<DensityComponent> density_;
    std::vector<LawAtom> atoms_;
    double mass_at_infinity_ = 0.0;

    // per-mark running density mass at grid nodes
    std::vector<std::vector<double>> density_cumulative_;
    std::vector<double> density_total_mass_; // per mark, at t_max
    double cutoff_ = 0.0;

    double density_mass_upto(double t, std::size_t mark) const;
    double invert_density_mass(std::size_t mark, double target) const;
};

/// Survival view F^A for a fixed subset, exposing right values, left limits
/// and the cutoff.
class SurvivalCurve {
public:
    SurvivalCurve(std::shared_ptr<const JumpLaw> law, std::vector<std::size_t> subset,
                  bool include_no_jump);
    static SurvivalCurve all_marks(std::shared_ptr<const JumpLaw> law);

    double operator()(double t) const;
    double left(double t) const;
    double cutoff() const;

private:
    std::shared_ptr<const JumpLaw> law_;
    std::vector<std::size_t> subset_;
    bool include_no_jump_;
};

/// survival(law, t, A) by labels; unknown labels raise ValidationError.
double survival(const JumpLaw& law, double t, std::span<const std::string> labels);
double survival_left(const JumpLaw& law, double t, std::span<const std::string> labels);

} // namespace jumprep
