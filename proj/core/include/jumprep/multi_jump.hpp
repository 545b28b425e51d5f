#pragma once

#include "jumprep/calculus.hpp"
#include "jumprep/discrete.hpp"
#include "jumprep/field.hpp"
#include "jumprep/payoff.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace jumprep {

/// Finite-activity multi-jump model: either a compound Poisson model with
/// constant per-mark rates (deterministic compensator, exact skeleton
/// sampling) or a bounded history-dependent hazard sampled by thinning.
/// Realized paths are capped at max_jumps; the cap carries the explicit tail
/// bound (Lambda H)^{N+1} / (N+1)!.
class MultiJumpModel : public SimulableModel {
public:
    static MultiJumpModel compound_poisson(MarkSpace marks, std::vector<double> rates,
                                           double horizon, std::size_t max_jumps = 256,
                                           std::size_t grid_steps = 512);
    static MultiJumpModel hazard_model(MarkSpace marks, CompensatorSpec::Hazard hazard,
                                       double rate_bound, double horizon,
                                       std::size_t max_jumps = 256,
                                       std::size_t grid_steps = 512,
                                       bool history_dependent = true);

    JumpPath sample_path(CounterStream& rng) const override;
    JumpPath sample_path(CounterStream& rng, bool& cap_hit) const;
    const CompensatorSpec& compensator() const override { return compensator_; }
    TimeGrid grid() const override { return grid_; }

    const MarkSpace& marks() const { return marks_; }
    double horizon() const { return grid_.horizon; }
    std::size_t max_jumps() const { return max_jumps_; }
    bool is_compound_poisson() const { return !rates_.empty(); }
    std::span<const double> rates() const { return rates_; }
    double total_rate() const { return total_rate_; }
    double tail_probability_bound() const;

private:
    MultiJumpModel(MarkSpace marks, TimeGrid grid, CompensatorSpec comp,
                   std::vector<double> rates, double rate_bound, std::size_t max_jumps);

    MarkSpace marks_;
    TimeGrid grid_;
    CompensatorSpec compensator_;
    std::vector<double> rates_;      // compound-poisson fast path
    std::vector<double> rate_cum_;   // cumulative rates for mark draws
    double total_rate_ = 0.0;
    double rate_bound_ = 0.0;
    std::size_t max_jumps_;
};

struct SimulationBatch {
    std::vector<JumpPath> paths;
    std::size_t cap_hits = 0;
};
SimulationBatch simulate_paths(const MultiJumpModel& model, std::size_t num_paths,
                               std::uint64_t seed, int threads = 0);

/// Streams i.i.d. paths to fn(index, path, cap_hit); fn runs concurrently for
/// distinct indices and must only touch per-index state.
void for_each_path(const MultiJumpModel& model, std::size_t num_paths, std::uint64_t seed,
                   int threads, const std::function<void(std::size_t, const JumpPath&, bool)>& fn);

/// Payoff of the form f(sum of weight[mark] over events by the horizon);
/// Markov in the running statistic, which must live on a lattice.
struct MarkStatPayoff {
    std::string name;
    std::vector<double> weight;
    std::function<double(double)> f;
    double lattice_step = 1.0;

    PathPayoff as_path_payoff() const;
};

/// Value function and integrand of a Markov payoff under a compound Poisson
/// model, built by Poisson-mixture dynamic programming on the lattice:
/// V(t,x) = sum_j P(N_{H-t} = j) E[f(x + S_j)], H(t,z|x) = V(t,x+w_z) - V(t,x).
class MarkovRepresentation {
public:
    MarkovRepresentation(const MultiJumpModel& model, const MarkStatPayoff& payoff,
                         double tail_eps = 1e-13);

    double m0() const { return value(0.0, 0.0); }
    double value(double t, double stat) const;
    double integrand_at(double t, double stat, std::size_t mark) const;
    PredictableField integrand() const;
    std::size_t dp_terms() const { return tables_.size(); }

private:
    double horizon_;
    double total_rate_;
    double step_;
    std::vector<double> weight_;
    std::vector<long long> weight_units_;
    long long min_units_ = 0; // lattice offset
    std::size_t lattice_size_ = 0;
    std::vector<std::vector<double>> tables_; // tables_[j][x] = E[f(x + S_j)]

    double table_at(std::size_t j, long long units) const;
};

/// Interval-by-interval representation integrand, M_t = E[payoff | F_t]:
/// compound Poisson models go through the Markov recursion; fully discrete
/// models go through exact enumeration.
PredictableField well_ordered_integrand(const MultiJumpModel& model,
                                        const MarkStatPayoff& payoff);
PredictableField well_ordered_integrand(const DiscreteModel& model, const PathPayoff& payoff);

} // namespace jumprep
