#pragma once

#include "jumprep/compensator.hpp"
#include "jumprep/field.hpp"
#include "jumprep/law.hpp"
#include "jumprep/marks.hpp"
#include "jumprep/payoff.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace jumprep {

/// Fully discrete integer-valued measure: K time slots, at most one jump per
/// slot, per-slot per-mark probabilities that may read the strictly earlier
/// outcome prefix. Outcome codes: 0 = no jump, z+1 = jump with mark z.
class DiscreteModel {
public:
    /// probs(slot, history_prefix, out): fills out[z] for every mark.
    using ProbFn = std::function<void(std::size_t, std::span<const int>, std::span<double>)>;

    DiscreteModel(MarkSpace marks, std::size_t slots, double horizon, ProbFn probs,
                  bool history_dependent);
    static DiscreteModel from_table(MarkSpace marks, double horizon,
                                    std::vector<std::vector<double>> probs_per_slot);

    const MarkSpace& marks() const { return marks_; }
    std::size_t slots() const { return slots_; }
    double horizon() const { return horizon_; }
    bool history_dependent() const { return history_dependent_; }
    double slot_time(std::size_t k) const;
    /// Slot whose time equals t, or npos when t is not a slot time.
    std::size_t slot_of(double t) const;

    std::vector<double> probabilities(std::size_t slot, std::span<const int> history) const;

    JumpPath path_from_outcomes(std::span<const int> outcomes) const;
    std::vector<int> outcomes_from_view(PathView past, std::size_t upto_slot) const;

    /// The compensator in atom form; masses read the outcome prefix.
    CompensatorSpec compensator() const;

    double leaf_count() const; // (marks+1)^slots

private:
    MarkSpace marks_;
    std::size_t slots_;
    double horizon_;
    ProbFn probs_;
    bool history_dependent_;
};

/// Exact backward recursion over the whole outcome tree. Ground truth for
/// conditional expectations, integrands and quadratic variation on discrete
/// models; independent of the constructive representation code paths.
class EnumerationOracle {
public:
    EnumerationOracle(const DiscreteModel& model, const PathPayoff& payoff);

    const DiscreteModel& model() const { return model_; }
    double m0() const { return values_[0][0]; }

    /// M at the node reached by `prefix` (conditional expectation given the
    /// first prefix.size() slot outcomes).
    double value(std::span<const int> prefix) const;
    /// Representation increment at the node: M(jump z next) - M(no jump next).
    double integrand(std::span<const int> prefix, std::size_t mark) const;
    double node_probability(std::span<const int> prefix) const;

    /// The integrand as a history-dependent field on slot times.
    PredictableField integrand_field() const;

    /// Exact expectation of a leaf functional.
    double expectation(const std::function<double(std::span<const int>)>& leaf_fn) const;
    void for_each_leaf(
        const std::function<void(std::span<const int>, double, const JumpPath&)>& fn) const;

    /// max over leaves of |payoff - M0 - sum of compensated increments|; an
    /// exact-zero identity that exercises the whole tree consistently.
    double representation_residual() const;

    struct ExactIsometry {
        double lhs = 0.0; // E[(W*mu~)_H^2]
        double rhs = 0.0; // E[(W^2 * <mu~>)_H]
    };
    ExactIsometry isometry(const PredictableField& W) const;

private:
    DiscreteModel model_;
    std::vector<std::vector<double>> values_; // values_[k][node] with (m+1)^k nodes
    std::size_t radix_;

    std::size_t node_index(std::span<const int> prefix) const;
    void decode(std::size_t level, std::size_t index, std::vector<int>& prefix) const;
};

/// A single-jump scenario in two equivalent forms: the atomic law nu and the
/// stop-after-first-jump discrete model with conditional slot probabilities.
struct SingleJumpDiscrete {
    std::shared_ptr<const JumpLaw> law;
    DiscreteModel model;
};

/// slot_masses[k][z] are the unconditional masses nu({t_k} x {z}); whatever
/// is left becomes the no-jump mass.
SingleJumpDiscrete make_single_jump_discrete(MarkSpace marks,
                                             std::vector<std::vector<double>> slot_masses,
                                             double horizon);

} // namespace jumprep
