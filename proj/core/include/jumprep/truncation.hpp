#pragma once

#include "jumprep/multi_jump.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace jumprep {

/// Increasing truncations A_n = {marks 1..n} of a conceptually infinite
/// family of independent mark channels with values z_k and intensities
/// lambda_k. Each level is a finite-activity compound Poisson model in its
/// own right, and the level-n compensator is the restriction of the full one.
struct TruncationFamily {
    std::vector<double> mark_values;
    std::vector<double> intensities;
    double horizon = 1.0;
    std::size_t grid_steps = 512;
    // set for geometric families; enables infinite-tail closed forms
    double value_ratio = 0.0;
    double rate_ratio = 0.0;

    static TruncationFamily geometric(double first_value, double value_ratio,
                                      double first_rate, double rate_ratio,
                                      std::size_t max_level, double horizon,
                                      std::size_t grid_steps = 512);

    std::size_t max_level() const { return mark_values.size(); }
    double level_rate(std::size_t n) const; // Lambda_n
    MultiJumpModel level_model(std::size_t n) const;

    /// horizon * sum_{from < k <= to} lambda_k z_k^2
    double tail_l2(std::size_t from_exclusive, std::size_t to_inclusive) const;
    /// geometric families only: horizon * sum_{k > from} lambda_k z_k^2
    double tail_l2_infinite(std::size_t from_exclusive) const;
};

enum class StudyPayoffKind { mark_sum, indicator_positive };

struct TruncationRow {
    std::size_t level = 0;
    double m0 = 0.0;
    // L2 residual against the reference level: E[((H^n - H^R) * mu~)_H^2]
    double residual = 0.0;
    double residual_se = 0.0;
    double target = 0.0; // closed-form infinite tail when available, else NaN
    // gap to the previous requested level, isometry route
    double gap_prev = 0.0;
    double gap_prev_se = 0.0;
    // the same gap through the integrand form E[((H^n-H^m)^2 * <mu~>)_H]
    double form_gap_prev = 0.0;
    double form_gap_prev_se = 0.0;
};

struct TruncationStudy {
    std::vector<TruncationRow> rows;
    std::size_t reference_level = 0;
    std::size_t num_paths = 0;
    std::size_t cap_hits = 0;
    double cap_tail_bound = 0.0;
    bool gaps_decreasing = false; // successive gaps nonincreasing within 3 SE
};

/// Simulates the reference level once and measures, per requested level, the
/// L2 distance between level integrands both as squared compensated payoff
/// differences (the isometry route, honest standard errors) and as the
/// explicit quadratic form against <mu~> (closed-form segment integrals).
TruncationStudy truncation_study(const TruncationFamily& family, StudyPayoffKind kind,
                                 std::span<const std::size_t> levels,
                                 std::size_t reference_level, std::size_t num_paths,
                                 std::uint64_t seed, int threads = 0);

/// The level-n integrand of the bundled study payoffs in closed form (what
/// the interval recursion produces for them; cross-checked against the
/// Markov DP in the tests).
PredictableField study_integrand(const TruncationFamily& family, StudyPayoffKind kind,
                                 std::size_t level);

struct ProjectionRow {
    double level = 0.0; // clip bound or refinement index
    double m0 = 0.0;
    double representation_error = 0.0; // pathwise, over the check sample
    double gap_prev = 0.0;
    double gap_prev_se = 0.0;
};

/// Represents clipped versions clamp(X, -L, L) of the terminal mark sum and
/// measures integrand convergence as the clip widens. The representation
/// error drives the DP field through the generic integrator on a small check
/// sample; gaps use the isometry route on the full sample.
std::vector<ProjectionRow> l2_projection_test(const MultiJumpModel& model,
                                              std::span<const double> clip_levels,
                                              std::size_t num_paths, std::size_t check_paths,
                                              std::uint64_t seed, int threads = 0);

/// Discrete variant: simple approximants obtained by quantizing the payoff
/// to 2^-bits resolution; everything is exact through the oracle, and the
/// gaps hit zero once the quantizer resolves the payoff's finitely many
/// values.
std::vector<ProjectionRow> l2_projection_test(const DiscreteModel& model,
                                              const PathPayoff& payoff,
                                              std::span<const int> quantization_bits);

} // namespace jumprep
