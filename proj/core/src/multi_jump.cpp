#include "jumprep/multi_jump.hpp"

#include "jumprep/errors.hpp"
#include "jumprep/parallel.hpp"
#include "jumprep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jumprep {

MultiJumpModel::MultiJumpModel(MarkSpace marks, TimeGrid grid, CompensatorSpec comp,
                               std::vector<double> rates, double rate_bound,
                               std::size_t max_jumps)
    : marks_(std::move(marks)),
      grid_(grid),
      compensator_(std::move(comp)),
      rates_(std::move(rates)),
      rate_bound_(rate_bound),
      max_jumps_(max_jumps) {
    if (max_jumps_ == 0) throw ValidationError("max_jumps must be positive");
    if (!rates_.empty()) {
        rate_cum_.resize(rates_.size());
        double c = 0.0;
        for (std::size_t z = 0; z < rates_.size(); ++z) {
            if (rates_[z] < 0.0) throw ValidationError("negative jump rate");
            c += rates_[z];
            rate_cum_[z] = c;
        }
        total_rate_ = c;
    }
}

MultiJumpModel MultiJumpModel::compound_poisson(MarkSpace marks, std::vector<double> rates,
                                                double horizon, std::size_t max_jumps,
                                                std::size_t grid_steps) {
    if (rates.size() != marks.size())
        throw ValidationError("one rate per mark is required");
    auto hazard_rates = rates;
    CompensatorSpec comp(
        marks.size(),
        [hazard_rates](double, std::size_t z, PathView) { return hazard_rates[z]; }, {},
        /*history_dependent=*/false,
        std::accumulate(hazard_rates.begin(), hazard_rates.end(), 0.0));
    return MultiJumpModel(std::move(marks), TimeGrid{horizon, grid_steps}, std::move(comp),
                          std::move(rates), 0.0, max_jumps);
}

MultiJumpModel MultiJumpModel::hazard_model(MarkSpace marks, CompensatorSpec::Hazard hazard,
                                            double rate_bound, double horizon,
                                            std::size_t max_jumps, std::size_t grid_steps,
                                            bool history_dependent) {
    if (!(rate_bound > 0.0))
        throw ValidationError("hazard_model requires a positive total-rate bound");
    CompensatorSpec comp(marks.size(), std::move(hazard), {}, history_dependent, rate_bound);
    return MultiJumpModel(std::move(marks), TimeGrid{horizon, grid_steps}, std::move(comp),
                          {}, rate_bound, max_jumps);
}

JumpPath MultiJumpModel::sample_path(CounterStream& rng) const {
    bool ignored = false;
    return sample_path(rng, ignored);
}

JumpPath MultiJumpModel::sample_path(CounterStream& rng, bool& cap_hit) const {
    JumpPath path;
    path.horizon = grid_.horizon;
    cap_hit = false;

    if (is_compound_poisson()) {
        if (total_rate_ <= 0.0) return path;
        double t = 0.0;
        while (true) {
            t += rng.exponential(total_rate_);
            if (t > grid_.horizon) break;
            if (path.events.size() >= max_jumps_) {
                cap_hit = true;
                break;
            }
            const std::size_t z = rng.categorical(rate_cum_.data(), rate_cum_.size());
            path.events.push_back({t, z});
        }
        return path;
    }

    // thinning against the declared bound
    double t = 0.0;
    std::vector<double> mark_cum(marks_.size());
    while (true) {
        t += rng.exponential(rate_bound_);
        if (t > grid_.horizon) break;
        const PathView past = strict_past(path, t);
        double total = 0.0;
        for (std::size_t z = 0; z < marks_.size(); ++z) {
            total += compensator_.hazard(t, z, past);
            mark_cum[z] = total;
        }
        if (total > rate_bound_ * (1.0 + 1e-9))
            throw DiagnosticError("hazard exceeds its declared bound at t = " +
                                  std::to_string(t));
        if (total <= 0.0) continue;
        if (rng.uniform01() * rate_bound_ >= total) continue;
        if (path.events.size() >= max_jumps_) {
            cap_hit = true;
            break;
        }
        path.events.push_back({t, rng.categorical(mark_cum.data(), mark_cum.size())});
    }
    return path;
}

double MultiJumpModel::tail_probability_bound() const {
    const double lambda_h =
        (is_compound_poisson() ? total_rate_ : rate_bound_) * grid_.horizon;
    if (lambda_h <= 0.0) return 0.0;
    const double n1 = static_cast<double>(max_jumps_) + 1.0;
    return std::exp(n1 * std::log(lambda_h) - std::lgamma(n1 + 1.0));
}

SimulationBatch simulate_paths(const MultiJumpModel& model, std::size_t num_paths,
                               std::uint64_t seed, int threads) {
    SimulationBatch batch;
    batch.paths.resize(num_paths);
    std::vector<char> caps(num_paths, 0);
    parallel_for(num_paths, threads, [&](std::size_t i) {
        CounterStream rng(seed, i, stream_tag::events);
        bool cap = false;
        batch.paths[i] = model.sample_path(rng, cap);
        caps[i] = cap ? 1 : 0;
    });
    for (char c : caps) batch.cap_hits += static_cast<std::size_t>(c);
    return batch;
}

void for_each_path(const MultiJumpModel& model, std::size_t num_paths, std::uint64_t seed,
                   int threads,
                   const std::function<void(std::size_t, const JumpPath&, bool)>& fn) {
    parallel_for(num_paths, threads, [&](std::size_t i) {
        CounterStream rng(seed, i, stream_tag::events);
        bool cap = false;
        const JumpPath path = model.sample_path(rng, cap);
        fn(i, path, cap);
    });
}

PathPayoff MarkStatPayoff::as_path_payoff() const {
    return PathPayoff{name, [w = weight, g = f](const JumpPath& path) {
                          const PathView all{std::span<const JumpEvent>(path.events.data(),
                                                                        path.events.size())};
                          return g(all.statistic(w));
                      }};
}

MarkovRepresentation::MarkovRepresentation(const MultiJumpModel& model,
                                           const MarkStatPayoff& payoff, double tail_eps) {
    if (!model.is_compound_poisson())
        throw ScenarioError("well-ordered recursion supports compound Poisson models and "
                            "discrete models; general hazards are unsupported");
    if (payoff.weight.size() != model.marks().size())
        throw ValidationError("payoff weight vector does not match the mark space");
    if (!(payoff.lattice_step > 0.0)) throw ValidationError("lattice step must be positive");

    horizon_ = model.horizon();
    total_rate_ = model.total_rate();
    step_ = payoff.lattice_step;
    weight_ = payoff.weight;

    weight_units_.resize(weight_.size());
    for (std::size_t z = 0; z < weight_.size(); ++z) {
        const double units = weight_[z] / step_;
        const double rounded = std::round(units);
        if (std::fabs(units - rounded) > 1e-9)
            throw ValidationError("payoff weight is not on the declared lattice");
        weight_units_[z] = static_cast<long long>(rounded);
    }

    const double mean = total_rate_ * horizon_;
    if (mean > 500.0)
        throw ScenarioError("compound Poisson DP limited to rate*horizon <= 500");
    std::size_t terms = 1;
    {
        double p = std::exp(-mean);
        double cdf = p;
        while (cdf < 1.0 - tail_eps && terms < 4096) {
            p *= mean / static_cast<double>(terms);
            cdf += p;
            ++terms;
        }
        terms += 2;
    }

    long long min_k = 0, max_k = 0;
    for (long long k : weight_units_) {
        min_k = std::min(min_k, k);
        max_k = std::max(max_k, k);
    }
    const long long radius =
        static_cast<long long>(std::max<std::size_t>(terms + 4, model.max_jumps()));
    min_units_ = radius * min_k;
    const long long max_units = radius * max_k;
    lattice_size_ = static_cast<std::size_t>(max_units - min_units_ + 1);
    if (lattice_size_ > 50'000'000) throw ScenarioError("DP lattice too large");

    tables_.resize(terms);
    tables_[0].resize(lattice_size_);
    for (std::size_t i = 0; i < lattice_size_; ++i)
        tables_[0][i] =
            payoff.f(static_cast<double>(min_units_ + static_cast<long long>(i)) * step_);

    std::vector<double> q(weight_.size());
    for (std::size_t z = 0; z < weight_.size(); ++z)
        q[z] = total_rate_ > 0.0 ? model.rates()[z] / total_rate_ : 0.0;

    for (std::size_t j = 1; j < terms; ++j) {
        tables_[j].resize(lattice_size_);
        const auto& prev = tables_[j - 1];
        for (std::size_t i = 0; i < lattice_size_; ++i) {
            double v = 0.0;
            for (std::size_t z = 0; z < q.size(); ++z) {
                if (q[z] == 0.0) continue;
                long long idx = static_cast<long long>(i) + weight_units_[z];
                idx = std::clamp<long long>(idx, 0, static_cast<long long>(lattice_size_) - 1);
                v += q[z] * prev[static_cast<std::size_t>(idx)];
            }
            tables_[j][i] = v;
        }
    }
}

double MarkovRepresentation::table_at(std::size_t j, long long units) const {
    long long idx = units - min_units_;
    idx = std::clamp<long long>(idx, 0, static_cast<long long>(lattice_size_) - 1);
    return tables_[j][static_cast<std::size_t>(idx)];
}

double MarkovRepresentation::value(double t, double stat) const {
    const long long units = static_cast<long long>(std::round(stat / step_));
    const double tau = std::max(0.0, horizon_ - t);
    const double mean = total_rate_ * tau;
    double p = std::exp(-mean);
    double total_p = p;
    double v = p * table_at(0, units);
    for (std::size_t j = 1; j < tables_.size(); ++j) {
        p *= mean / static_cast<double>(j);
        total_p += p;
        v += p * table_at(j, units);
    }
    // renormalize the truncated Poisson mixture so constants are represented
    // exactly regardless of the truncation depth
    return total_p > 0.0 ? v / total_p : v;
}

double MarkovRepresentation::integrand_at(double t, double stat, std::size_t mark) const {
    return value(t, stat + weight_[mark]) - value(t, stat);
}

PredictableField MarkovRepresentation::integrand() const {
    auto self = std::make_shared<const MarkovRepresentation>(*this);
    return PredictableField::with_history(
        [self](double t, std::size_t mark, PathView past) {
            const double stat = past.statistic(self->weight_);
            return self->integrand_at(t, stat, mark);
        });
}

PredictableField well_ordered_integrand(const MultiJumpModel& model,
                                        const MarkStatPayoff& payoff) {
    return MarkovRepresentation(model, payoff).integrand();
}

PredictableField well_ordered_integrand(const DiscreteModel& model, const PathPayoff& payoff) {
    return EnumerationOracle(model, payoff).integrand_field();
}

} // namespace jumprep
