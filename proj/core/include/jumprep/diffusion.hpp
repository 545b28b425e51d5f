#pragma once

#include "jumprep/multi_jump.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace jumprep {

/// Deterministic quadratic-variation schedule of the continuous martingale:
/// Y is a Brownian motion time-changed by Gamma.
struct DiffusionSpec {
    std::function<double(double)> gamma;
    double horizon = 1.0;
    std::size_t grid_steps = 512;

    void validate() const; // Gamma(0) = 0, nondecreasing on the grid, finite
    static DiffusionSpec linear(double slope, double horizon, std::size_t grid_steps = 512);
};

/// Terminal payoff f(Y_horizon); known kinds carry closed-form integrands,
/// anything else goes through panel quadrature.
class ContinuousPayoff {
public:
    enum class Kind { digital, identity, square_centered, constant, custom };

    static ContinuousPayoff digital(double strike);
    static ContinuousPayoff identity();
    /// y^2 - c, a martingale payoff when c = Gamma(horizon)
    static ContinuousPayoff square_centered(double c);
    static ContinuousPayoff constant(double value);
    static ContinuousPayoff custom(std::function<double(double)> f,
                                   std::vector<double> breakpoints = {});

    Kind kind() const { return kind_; }
    double parameter() const { return parameter_; }
    double operator()(double y) const { return f_(y); }
    std::span<const double> breakpoints() const { return breakpoints_; }

private:
    Kind kind_ = Kind::custom;
    double parameter_ = 0.0;
    std::function<double(double)> f_;
    std::vector<double> breakpoints_;
};

/// u(t, y) = E[f(y + G)] for G ~ N(0, Gamma(H) - Gamma(t)), and the
/// representation integrand H(t, y) = d/dy u(t, y) so that
/// f(Y_H) = E[f] + integral of H dY. Known payoffs evaluate in closed form;
/// the quadrature routes stay available for cross-checks.
class BrownianIntegrand {
public:
    BrownianIntegrand(ContinuousPayoff payoff, DiffusionSpec spec);

    double remaining_variance(double t) const;
    double u(double t, double y) const;
    double dy(double t, double y) const;

    /// Gaussian-weighted panel quadrature with panels split at payoff
    /// breakpoints (discontinuities integrate exactly piece by piece).
    double u_quadrature(double t, double y) const;
    /// d/dy under the integral via the Gaussian score; no f' needed.
    double dy_quadrature(double t, double y) const;
    /// central finite difference of u_quadrature, for the gradient check
    double dy_fd(double t, double y) const;

    const ContinuousPayoff& payoff() const { return payoff_; }

private:
    ContinuousPayoff payoff_;
    DiffusionSpec spec_;
    double gamma_h_ = 0.0;

    double panels(double t, double y, bool score) const;
};

/// alpha + integral beta dY represents f(Y_H) in the continuous filtration.
struct ContinuousFactor {
    double alpha = 0.0;
    std::shared_ptr<const BrownianIntegrand> beta;
    ContinuousPayoff payoff = ContinuousPayoff::constant(1.0);
};
ContinuousFactor continuous_factor(ContinuousPayoff payoff, const DiffusionSpec& spec,
                                   double y0 = 0.0);

/// alpha + (beta * mu~) represents the jump payoff in the jump filtration.
struct JumpFactor {
    double alpha = 0.0;
    PredictableField beta;
    PathPayoff payoff;
};
JumpFactor jump_factor(const MarkStatPayoff& payoff, const MultiJumpModel& jumps);

/// One product term I^c I^d of the weak-representation algebra.
struct ProductTerm {
    double coef = 1.0;
    ContinuousFactor cont;
    JumpFactor jump;
};

/// M_t = m0 + int H dY + G * (mu - mu_p), with
/// H_t = sum coef * Md_{t-} * beta_c(t, Y_t) and G(t,z) = sum coef * Mc_t * beta_d(t,z):
/// the Ito product rule across independent continuous and jump factors.
struct WeakRepresentation {
    double m0 = 0.0;
    std::vector<ProductTerm> terms;
};
WeakRepresentation product_representation(ContinuousFactor cont, JumpFactor jump);
WeakRepresentation weak_representation(std::vector<ProductTerm> terms);

/// Independent continuous and jump factors driven jointly.
struct JointModel {
    DiffusionSpec diffusion;
    MultiJumpModel jumps;
    double y0 = 0.0;
};

struct ReplicationReport {
    double mean_error = 0.0;
    double mean_error_se = 0.0;
    double rms_error = 0.0;
    double rms_error_se = 0.0;
    /// covariance of the continuous and jump integral totals
    double orthogonality_cov = 0.0;
    double orthogonality_se = 0.0;
    std::size_t num_paths = 0;
};

/// Simulates joint paths, accumulates both integrals with the left-point
/// Euler rule (events and their compensator handled exactly in time), and
/// reports the replication residual against the terminal product payoff.
ReplicationReport replicate(const WeakRepresentation& rep, const JointModel& model,
                            std::size_t num_paths, std::uint64_t seed, int threads = 0,
                            std::size_t grid_steps_override = 0);

/// Fully discrete joint model: each slot moves either the walk (+-step) or
/// the jump measure (at most one mark), never both, so every payoff has an
/// exact (H, G) representation computable by enumeration.
struct JointDiscreteModel {
    double step_value = 0.1;
    MarkSpace marks;
    struct Slot {
        bool diffusion = true;
        std::vector<double> jump_probs; // empty for diffusion slots
    };
    std::vector<Slot> slots;
    double horizon = 1.0;

    double leaf_count() const;
};

struct JointOracleResult {
    double m0 = 0.0;
    /// max over leaves of |payoff - m0 - sum H dY - sum G dmu~|, exact
    double max_representation_error = 0.0;
};

/// Outcome codes: diffusion slot 0/1 = up/down; jump slot 0 = none, z+1 = mark z.
JointOracleResult enumerate_joint(const JointDiscreteModel& model,
                                  const std::function<double(std::span<const int>)>& payoff);

} // namespace jumprep
