#pragma once

#include "jumprep/calculus.hpp"
#include "jumprep/field.hpp"
#include "jumprep/law.hpp"
#include "jumprep/martingale_path.hpp"
#include "jumprep/payoff.hpp"

#include <atomic>
#include <cstdint>
#include <memory>

namespace jumprep {

/// E_nu[h] = integral of h against nu plus h(infinity) times the no-jump mass.
double payoff_mean(const PayoffFunctional& h, const JumpLaw& law);

/// h minus its mean, with the mean recorded as m0. DiagnosticError when the
/// absolute integral of h fails the finiteness check.
PayoffFunctional center_payoff(const PayoffFunctional& h, const JumpLaw& law);

/// Conditional-expectation path of a centered payoff along a path with zero
/// or one events: M_t = h(T,Z) once revealed, -(1/F_t) int_{]0,t]} h dnu
/// before. DiagnosticError past the cutoff on a no-jump path.
MartingalePath conditional_expectation_path(const PayoffFunctional& h,
                                            std::shared_ptr<const JumpLaw> law,
                                            const JumpPath& path);

/// Shared diagnostics of an integrand construction.
struct IntegrandDiagnostics {
    std::atomic<bool> conditioning_flagged{false}; // survival underflowed
};

/// The explicit representation integrand of the single-jump theorem:
///   g(t,x) = h(t,x) + (1/F_t) * integral over ]0,t] x E of h dnu,
/// with g = 0 past the cutoff (the <mu~>-null convention). Cumulative
/// integrals are precomputed on the law's grid, so evaluation is O(1) at grid
/// nodes and does one Gauss panel elsewhere.
PredictableField chou_meyer_integrand(const PayoffFunctional& h,
                                      std::shared_ptr<const JumpLaw> law,
                                      std::shared_ptr<IntegrandDiagnostics> diag = nullptr);

/// Checks int |g| dnu <= (1 + 1/F_t) int |h| dnu over ]0,t].
struct IntegrabilityBound {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
IntegrabilityBound integrability_bound_check(const PayoffFunctional& h,
                                             std::shared_ptr<const JumpLaw> law, double t);

/// E[((g1-g2)^2 * <mu~>)_horizon] under the single-jump model, evaluated in
/// closed form: the density part integrates (g1-g2)^2 dnu, an atom of mass m
/// at s contributes m (1 - m / F_{s-}) (g1-g2)^2. Two representations of the
/// same martingale give 0 up to quadrature noise.
double uniqueness_gap(const PredictableField& g1, const PredictableField& g2,
                      const JumpLaw& law, double horizon);

/// Monte Carlo hedge check for a single-jump scenario: residuals
/// payoff - m0 - (g * mu~)_horizon over sampled (T, Z). The drift table is
/// precomputed once; per-path work is O(log K).
struct ReplicationStats {
    double mean = 0.0;
    double se = 0.0;
    double rms = 0.0;
    std::size_t num_paths = 0;
};
ReplicationStats single_jump_replication(const PayoffFunctional& h_centered,
                                         const PredictableField& g,
                                         std::shared_ptr<const JumpLaw> law, double horizon,
                                         std::size_t grid_steps, std::size_t num_paths,
                                         std::uint64_t seed, int threads = 0);

/// Single-jump law wrapped as a simulable model (exact inverse-CDF sampling).
class SingleJumpModel : public SimulableModel {
public:
    SingleJumpModel(std::shared_ptr<const JumpLaw> law, double horizon,
                    std::size_t grid_steps);
    JumpPath sample_path(CounterStream& rng) const override;
    const CompensatorSpec& compensator() const override;
    TimeGrid grid() const override;
    const JumpLaw& law() const { return *law_; }

private:
    std::shared_ptr<const JumpLaw> law_;
    TimeGrid grid_;
    CompensatorSpec compensator_;
};

} // namespace jumprep
