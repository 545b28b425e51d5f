#pragma once

#include <cstdint>
#include <vector>

namespace jumprep {

/// Cox-measure recovery experiment: marks 1/n carry intensity n e^{W_t}, and
/// the windowed average mu(]t,t+h] x {1/n}) / (nh) recovers e^{W_t} as n
/// grows and h shrinks, at the Chebyshev rate.
struct CoxParams {
    std::vector<double> n_levels{1e2, 1e3, 1e4}; // increasing
    std::vector<double> windows{0.1, 0.01};      // h values
    double t = 1.0;
    double eps = 0.5;
    std::size_t num_paths = 10000;
    std::size_t steps_per_min_window = 16;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct CoxCell {
    double n = 0.0;
    double h = 0.0;
    /// empirical P(|est - e^{W_t}| >= eps) with standard error
    double exceed_prob = 0.0;
    double exceed_se = 0.0;
    /// the same frequency centered at the exact conditional mean c_h e^{W_t}
    double exceed_prob_exact_center = 0.0;
    /// E[e^{W_t}] / (n h eps^2)
    double bound_plain = 0.0;
    /// Chebyshev bound around the exact center, E[Var(est | W_t)] / eps^2
    double bound_exact = 0.0;
    /// the exact window factor c_h = 2 (e^{h/2} - 1) / h
    double exact_factor = 0.0;
    double mse = 0.0; // E[(est - e^{W_t})^2]
    double mse_se = 0.0;
    double mean_est = 0.0;
    double mean_est_se = 0.0;
};

struct FrozenWCheck {
    double mean_est = 0.0;
    double se = 0.0;
    double target = 0.0; // (1/h) integral of the frozen intensity over the window
};

struct CoxReport {
    std::vector<CoxCell> cells; // ordered by (h, n)
    bool mse_monotone_in_n = true;
    FrozenWCheck frozen;
};

CoxReport cox_counterexample_experiment(const CoxParams& params);

/// E[est | W] check against the frozen path's exact windowed intensity mass;
/// zero_w freezes W = 0, where the estimator is Poisson(nh)/(nh) with mean
/// exactly 1.
FrozenWCheck cox_conditional_mean_check(const CoxParams& params, bool zero_w = false);

} // namespace jumprep
