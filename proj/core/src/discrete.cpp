#include "jumprep/discrete.hpp"

#include "jumprep/errors.hpp"

#include <algorithm>
#include <cmath>

namespace jumprep {

namespace {
constexpr double kProbTolerance = 1e-12;
constexpr double kMaxLeaves = 1e7;
} // namespace

DiscreteModel::DiscreteModel(MarkSpace marks, std::size_t slots, double horizon, ProbFn probs,
                             bool history_dependent)
    : marks_(std::move(marks)),
      slots_(slots),
      horizon_(horizon),
      probs_(std::move(probs)),
      history_dependent_(history_dependent) {
    if (slots_ == 0) throw ValidationError("DiscreteModel needs at least one slot");
    if (!(horizon_ > 0.0)) throw ValidationError("DiscreteModel horizon must be positive");
    if (!probs_) throw ValidationError("DiscreteModel needs a probability rule");
}

DiscreteModel DiscreteModel::from_table(MarkSpace marks, double horizon,
                                        std::vector<std::vector<double>> probs_per_slot) {
    const std::size_t m = marks.size();
    for (const auto& row : probs_per_slot)
        if (row.size() != m)
            throw ValidationError("probability row does not match the mark space");
    const std::size_t slots = probs_per_slot.size();
    auto fn = [table = std::move(probs_per_slot)](std::size_t slot, std::span<const int>,
                                                  std::span<double> out) {
        const auto& row = table[slot];
        std::copy(row.begin(), row.end(), out.begin());
    };
    return DiscreteModel(std::move(marks), slots, horizon, std::move(fn),
                         /*history_dependent=*/false);
}

double DiscreteModel::slot_time(std::size_t k) const {
    return horizon_ * static_cast<double>(k + 1) / static_cast<double>(slots_);
}

std::size_t DiscreteModel::slot_of(double t) const {
    const double x = t * static_cast<double>(slots_) / horizon_;
    const double r = std::round(x);
    if (r < 1.0 || r > static_cast<double>(slots_)) return kNoMark;
    if (std::fabs(x - r) > 1e-9) return kNoMark;
    return static_cast<std::size_t>(r) - 1;
}

std::vector<double> DiscreteModel::probabilities(std::size_t slot,
                                                 std::span<const int> history) const {
    if (slot >= slots_) throw ValidationError("slot index out of range");
    std::vector<double> out(marks_.size(), 0.0);
    probs_(slot, history, out);
    double total = 0.0;
    for (double p : out) {
        if (p < -kProbTolerance) throw ValidationError("negative slot probability");
        total += p;
    }
    if (total > 1.0 + kProbTolerance)
        throw ValidationError("slot probabilities exceed 1");
    return out;
}

JumpPath DiscreteModel::path_from_outcomes(std::span<const int> outcomes) const {
    JumpPath path;
    path.horizon = horizon_;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (outcomes[k] == 0) continue;
        path.events.push_back({slot_time(k), static_cast<std::size_t>(outcomes[k] - 1)});
    }
    return path;
}

std::vector<int> DiscreteModel::outcomes_from_view(PathView past, std::size_t upto_slot) const {
    std::vector<int> prefix(upto_slot, 0);
    for (const auto& e : past.events) {
        const std::size_t k = slot_of(e.time);
        if (k == kNoMark || k >= upto_slot)
            throw ValidationError("event time does not sit on a slot of this model");
        prefix[k] = static_cast<int>(e.mark) + 1;
    }
    return prefix;
}

CompensatorSpec DiscreteModel::compensator() const {
    std::vector<CompensatorAtom> atoms;
    atoms.reserve(slots_ * marks_.size());
    for (std::size_t k = 0; k < slots_; ++k) {
        for (std::size_t z = 0; z < marks_.size(); ++z) {
            CompensatorAtom atom;
            atom.time = slot_time(k);
            atom.mark = z;
            atom.mass_fn = [model = *this, k, z](PathView past) {
                const auto prefix = model.outcomes_from_view(past, k);
                return model.probabilities(k, prefix)[z];
            };
            atoms.push_back(std::move(atom));
        }
    }
    return CompensatorSpec(marks_.size(), /*hazard=*/nullptr, std::move(atoms),
                           /*history_dependent=*/true);
}

double DiscreteModel::leaf_count() const {
    return std::pow(static_cast<double>(marks_.size() + 1), static_cast<double>(slots_));
}

EnumerationOracle::EnumerationOracle(const DiscreteModel& model, const PathPayoff& payoff)
    : model_(model), radix_(model.marks().size() + 1) {
    const double leaves = model_.leaf_count();
    if (leaves > kMaxLeaves)
        throw ScenarioError("outcome tree too large: " + std::to_string(leaves) +
                            " leaves exceed the 1e7 bound");

    const std::size_t K = model_.slots();
    values_.resize(K + 1);
    std::size_t n = 1;
    for (std::size_t k = 0; k <= K; ++k) {
        values_[k].resize(n);
        if (k < K) n *= radix_;
    }

    // leaf payoffs
    std::vector<int> outcomes(K, 0);
    for (std::size_t leaf = 0; leaf < values_[K].size(); ++leaf) {
        decode(K, leaf, outcomes);
        values_[K][leaf] = payoff(model_.path_from_outcomes(outcomes));
    }

    // backward conditional expectations
    std::vector<int> prefix;
    for (std::size_t k = K; k-- > 0;) {
        prefix.assign(k, 0);
        for (std::size_t node = 0; node < values_[k].size(); ++node) {
            decode(k, node, prefix);
            const auto p = model_.probabilities(k, prefix);
            double none = 1.0;
            for (double pz : p) none -= pz;
            double v = none * values_[k + 1][node * radix_];
            for (std::size_t z = 0; z < p.size(); ++z)
                v += p[z] * values_[k + 1][node * radix_ + z + 1];
            values_[k][node] = v;
        }
    }
}

std::size_t EnumerationOracle::node_index(std::span<const int> prefix) const {
    std::size_t index = 0;
    for (int code : prefix) {
        if (code < 0 || static_cast<std::size_t>(code) >= radix_)
            throw ValidationError("outcome code out of range");
        index = index * radix_ + static_cast<std::size_t>(code);
    }
    return index;
}

void EnumerationOracle::decode(std::size_t level, std::size_t index,
                               std::vector<int>& prefix) const {
    prefix.assign(level, 0);
    for (std::size_t k = level; k-- > 0;) {
        prefix[k] = static_cast<int>(index % radix_);
        index /= radix_;
    }
}

double EnumerationOracle::value(std::span<const int> prefix) const {
    if (prefix.size() >= values_.size())
        throw ValidationError("prefix longer than the slot count");
    return values_[prefix.size()][node_index(prefix)];
}

double EnumerationOracle::integrand(std::span<const int> prefix, std::size_t mark) const {
    const std::size_t k = prefix.size();
    if (k >= model_.slots())
        throw ValidationError("integrand prefix must name an internal node");
    const std::size_t base = node_index(prefix) * radix_;
    return values_[k + 1][base + mark + 1] - values_[k + 1][base];
}

double EnumerationOracle::node_probability(std::span<const int> prefix) const {
    double prob = 1.0;
    std::vector<int> head;
    head.reserve(prefix.size());
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        const auto p = model_.probabilities(k, head);
        if (prefix[k] == 0) {
            double none = 1.0;
            for (double pz : p) none -= pz;
            prob *= none;
        } else {
            prob *= p[static_cast<std::size_t>(prefix[k]) - 1];
        }
        head.push_back(prefix[k]);
    }
    return prob;
}

PredictableField EnumerationOracle::integrand_field() const {
    auto self = std::make_shared<const EnumerationOracle>(*this);
    return PredictableField::with_history(
        [self](double t, std::size_t mark, PathView past) -> double {
            const std::size_t k = self->model_.slot_of(t);
            if (k == kNoMark) return 0.0;
            const auto prefix = self->model_.outcomes_from_view(past, k);
            return self->integrand(prefix, mark);
        });
}

double EnumerationOracle::expectation(
    const std::function<double(std::span<const int>)>& leaf_fn) const {
    const std::size_t K = model_.slots();
    std::vector<int> outcomes;
    double total = 0.0;
    for (std::size_t leaf = 0; leaf < values_[K].size(); ++leaf) {
        decode(K, leaf, outcomes);
        total += node_probability(outcomes) * leaf_fn(outcomes);
    }
    return total;
}

void EnumerationOracle::for_each_leaf(
    const std::function<void(std::span<const int>, double, const JumpPath&)>& fn) const {
    const std::size_t K = model_.slots();
    std::vector<int> outcomes;
    for (std::size_t leaf = 0; leaf < values_[K].size(); ++leaf) {
        decode(K, leaf, outcomes);
        fn(outcomes, node_probability(outcomes), model_.path_from_outcomes(outcomes));
    }
}

double EnumerationOracle::representation_residual() const {
    const std::size_t K = model_.slots();
    std::vector<int> outcomes;
    double worst = 0.0;
    for (std::size_t leaf = 0; leaf < values_[K].size(); ++leaf) {
        decode(K, leaf, outcomes);
        double x = 0.0;
        std::vector<int> head;
        head.reserve(K);
        for (std::size_t k = 0; k < K; ++k) {
            const auto p = model_.probabilities(k, head);
            const std::size_t base = node_index(head) * radix_;
            double compensated = 0.0;
            for (std::size_t z = 0; z < p.size(); ++z)
                compensated += p[z] * (values_[k + 1][base + z + 1] - values_[k + 1][base]);
            if (outcomes[k] != 0)
                x += values_[k + 1][base + static_cast<std::size_t>(outcomes[k])] -
                     values_[k + 1][base];
            x -= compensated;
            head.push_back(outcomes[k]);
        }
        worst = std::max(worst, std::fabs(values_[K][node_index(outcomes)] - m0() - x));
    }
    return worst;
}

EnumerationOracle::ExactIsometry EnumerationOracle::isometry(const PredictableField& W) const {
    ExactIsometry out;
    const std::size_t K = model_.slots();

    // rhs: sum over internal nodes of the conditional variance form
    std::vector<int> prefix;
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t nodes = values_[k].size();
        for (std::size_t node = 0; node < nodes; ++node) {
            decode(k, node, prefix);
            const double pn = node_probability(prefix);
            if (pn == 0.0) continue;
            const auto p = model_.probabilities(k, prefix);
            const JumpPath past_path = model_.path_from_outcomes(prefix);
            const PathView past{std::span<const JumpEvent>(past_path.events.data(),
                                                           past_path.events.size())};
            const double t = model_.slot_time(k);
            double wq = 0.0;
            double w2q = 0.0;
            for (std::size_t z = 0; z < p.size(); ++z) {
                if (p[z] == 0.0) continue;
                const double w = W(t, z, past);
                wq += w * p[z];
                w2q += w * w * p[z];
            }
            out.rhs += pn * (w2q - wq * wq);
        }
    }

    // lhs: exact expectation of the squared terminal integral
    std::vector<int> outcomes;
    for (std::size_t leaf = 0; leaf < values_[K].size(); ++leaf) {
        decode(K, leaf, outcomes);
        const double pl = node_probability(outcomes);
        if (pl == 0.0) continue;
        double x = 0.0;
        std::vector<int> head;
        head.reserve(K);
        for (std::size_t k = 0; k < K; ++k) {
            const auto p = model_.probabilities(k, head);
            const JumpPath past_path = model_.path_from_outcomes(head);
            const PathView past{std::span<const JumpEvent>(past_path.events.data(),
                                                           past_path.events.size())};
            const double t = model_.slot_time(k);
            for (std::size_t z = 0; z < p.size(); ++z)
                if (p[z] != 0.0) x -= W(t, z, past) * p[z];
            if (outcomes[k] != 0)
                x += W(t, static_cast<std::size_t>(outcomes[k]) - 1, past);
            head.push_back(outcomes[k]);
        }
        out.lhs += pl * x * x;
    }
    return out;
}

SingleJumpDiscrete make_single_jump_discrete(MarkSpace marks,
                                             std::vector<std::vector<double>> slot_masses,
                                             double horizon) {
    const std::size_t K = slot_masses.size();
    const std::size_t m = marks.size();
    if (K == 0) throw ValidationError("need at least one slot");
    for (const auto& row : slot_masses)
        if (row.size() != m) throw ValidationError("slot mass row does not match mark space");

    double total = 0.0;
    for (const auto& row : slot_masses)
        for (double mass : row) {
            if (mass < 0.0) throw ValidationError("negative slot mass");
            total += mass;
        }
    if (total > 1.0 + 1e-12) throw ValidationError("slot masses exceed total probability 1");
    const double mass_infinity = std::max(0.0, 1.0 - total);

    // tails[k] = P(T >= t_k) = F_{t_k-}
    std::vector<double> tails(K + 1, mass_infinity);
    for (std::size_t k = K; k-- > 0;) {
        double row = 0.0;
        for (double mass : slot_masses[k]) row += mass;
        tails[k] = tails[k + 1] + row;
    }

    TimeGrid grid{horizon, std::max<std::size_t>(K, 8)};
    std::vector<LawAtom> atoms;
    for (std::size_t k = 0; k < K; ++k) {
        const double t_k = horizon * static_cast<double>(k + 1) / static_cast<double>(K);
        for (std::size_t z = 0; z < m; ++z)
            if (slot_masses[k][z] > 0.0) atoms.push_back({t_k, z, slot_masses[k][z]});
    }

    auto law = std::make_shared<const JumpLaw>(marks, grid, std::vector<DensityComponent>{},
                                               std::move(atoms), mass_infinity);

    auto probs = [masses = std::move(slot_masses), tails](std::size_t slot,
                                                          std::span<const int> history,
                                                          std::span<double> out) {
        for (int code : history)
            if (code != 0) {
                std::fill(out.begin(), out.end(), 0.0);
                return;
            }
        const double tail = tails[slot];
        for (std::size_t z = 0; z < out.size(); ++z)
            out[z] = tail > 0.0 ? masses[slot][z] / tail : 0.0;
    };
    DiscreteModel model(marks, K, horizon, std::move(probs), /*history_dependent=*/true);
    return SingleJumpDiscrete{std::move(law), std::move(model)};
}

} // namespace jumprep
