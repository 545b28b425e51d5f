#include "jumprep/truncation.hpp"

#include "jumprep/calculus.hpp"
#include "jumprep/errors.hpp"
#include "jumprep/parallel.hpp"
#include "jumprep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jumprep {

namespace {

std::size_t cap_for(double mean) {
    return static_cast<std::size_t>(std::ceil(mean + 12.0 * std::sqrt(mean) + 30.0));
}

// int_a^b e^{-c (H - s)} ds for c > 0
double int_exp_tail(double c, double horizon, double a, double b) {
    if (b <= a) return 0.0;
    return (std::exp(-c * (horizon - b)) - std::exp(-c * (horizon - a))) / c;
}

} // namespace

TruncationFamily TruncationFamily::geometric(double first_value, double value_ratio,
                                             double first_rate, double rate_ratio,
                                             std::size_t max_level, double horizon,
                                             std::size_t grid_steps) {
    if (max_level == 0) throw ValidationError("geometric family needs at least one level");
    TruncationFamily fam;
    fam.horizon = horizon;
    fam.grid_steps = grid_steps;
    fam.value_ratio = value_ratio;
    fam.rate_ratio = rate_ratio;
    double z = first_value;
    double lam = first_rate;
    for (std::size_t k = 0; k < max_level; ++k) {
        fam.mark_values.push_back(z);
        fam.intensities.push_back(lam);
        z *= value_ratio;
        lam *= rate_ratio;
    }
    return fam;
}

double TruncationFamily::level_rate(std::size_t n) const {
    if (n == 0 || n > max_level()) throw ValidationError("level out of range");
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) total += intensities[k];
    return total;
}

MultiJumpModel TruncationFamily::level_model(std::size_t n) const {
    if (n == 0 || n > max_level()) throw ValidationError("level out of range");
    std::vector<Mark> marks;
    std::vector<double> rates;
    for (std::size_t k = 0; k < n; ++k) {
        marks.push_back({"z" + std::to_string(k + 1), mark_values[k]});
        rates.push_back(intensities[k]);
    }
    const double mean = level_rate(n) * horizon;
    return MultiJumpModel::compound_poisson(MarkSpace(std::move(marks)), std::move(rates),
                                            horizon, cap_for(mean), grid_steps);
}

double TruncationFamily::tail_l2(std::size_t from_exclusive,
                                 std::size_t to_inclusive) const {
    if (to_inclusive > max_level()) throw ValidationError("level out of range");
    double s = 0.0;
    for (std::size_t k = from_exclusive; k < to_inclusive; ++k)
        s += intensities[k] * mark_values[k] * mark_values[k];
    return horizon * s;
}

double TruncationFamily::tail_l2_infinite(std::size_t from_exclusive) const {
    if (value_ratio <= 0.0 || rate_ratio <= 0.0)
        throw ValidationError("infinite tail needs a geometric family");
    const double q = rate_ratio * value_ratio * value_ratio;
    if (q >= 1.0)
        throw ValidationError("family is not square-summable: rate*value^2 >= 1");
    const double base = intensities[0] * mark_values[0] * mark_values[0];
    return horizon * base * std::pow(q, static_cast<double>(from_exclusive)) / (1.0 - q);
}

PredictableField study_integrand(const TruncationFamily& family, StudyPayoffKind kind,
                                 std::size_t level) {
    if (level == 0 || level > family.max_level())
        throw ValidationError("level out of range");
    std::vector<double> values(family.mark_values.begin(),
                               family.mark_values.begin() + static_cast<long>(level));

    if (kind == StudyPayoffKind::mark_sum) {
        // linear payoff: the integrand is the jump size itself on A_n
        return PredictableField::with_history(
            [values](double, std::size_t mark, PathView) {
                return mark < values.size() ? values[mark] : 0.0;
            });
    }

    for (double z : values)
        if (!(z > 0.0))
            throw ValidationError("indicator_positive study needs positive mark values");
    const double rate = family.level_rate(level);
    const double horizon = family.horizon;
    const std::size_t n = level;
    return PredictableField::with_history(
        [rate, horizon, n](double t, std::size_t mark, PathView past) -> double {
            if (mark >= n) return 0.0;
            for (const auto& e : past.events)
                if (e.mark < n) return 0.0; // X already positive
            return std::exp(-rate * (horizon - t));
        });
}

TruncationStudy truncation_study(const TruncationFamily& family, StudyPayoffKind kind,
                                 std::span<const std::size_t> levels,
                                 std::size_t reference_level, std::size_t num_paths,
                                 std::uint64_t seed, int threads) {
    if (levels.empty()) throw ValidationError("truncation study needs at least one level");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] == 0 || levels[i] > family.max_level())
            throw ValidationError("study level out of range");
        if (i > 0 && levels[i] <= levels[i - 1])
            throw ValidationError("study levels must increase");
    }
    if (reference_level < levels.back() || reference_level > family.max_level())
        throw ValidationError("reference level must dominate the studied levels");

    const double horizon = family.horizon;
    const std::size_t L = levels.size();

    std::vector<std::size_t> lv(levels.begin(), levels.end());
    lv.push_back(reference_level);
    std::vector<double> m0(L + 1), lambda(L + 1);
    for (std::size_t i = 0; i <= L; ++i) {
        lambda[i] = family.level_rate(lv[i]);
        if (kind == StudyPayoffKind::mark_sum) {
            double drift = 0.0;
            for (std::size_t k = 0; k < lv[i]; ++k)
                drift += family.intensities[k] * family.mark_values[k];
            m0[i] = horizon * drift;
        } else {
            m0[i] = 1.0 - std::exp(-lambda[i] * horizon);
        }
    }

    const MultiJumpModel reference = family.level_model(reference_level);

    std::vector<std::vector<double>> centered(L + 1, std::vector<double>(num_paths));
    std::vector<std::vector<double>> form(L, std::vector<double>(num_paths, 0.0));
    std::vector<char> caps(num_paths, 0);

    for_each_path(reference, num_paths, seed, threads,
                  [&](std::size_t i, const JumpPath& path, bool cap) {
        caps[i] = cap ? 1 : 0;

        if (kind == StudyPayoffKind::mark_sum) {
            std::vector<double> sums(L + 1, 0.0);
            for (const auto& e : path.events) {
                const std::size_t lvl = e.mark + 1; // mark index k-1 belongs to level k
                for (std::size_t j = 0; j <= L; ++j)
                    if (lvl <= lv[j]) sums[j] += family.mark_values[e.mark];
            }
            for (std::size_t j = 0; j <= L; ++j) centered[j][i] = sums[j] - m0[j];
            for (std::size_t j = 1; j < L; ++j)
                form[j][i] = family.tail_l2(lv[j - 1], lv[j]);
        } else {
            std::vector<double> first(L + 1, std::numeric_limits<double>::infinity());
            for (const auto& e : path.events) {
                const std::size_t lvl = e.mark + 1;
                for (std::size_t j = 0; j <= L; ++j)
                    if (lvl <= lv[j]) first[j] = std::min(first[j], e.time);
            }
            for (std::size_t j = 0; j <= L; ++j)
                centered[j][i] = (std::isfinite(first[j]) ? 1.0 : 0.0) - m0[j];

            for (std::size_t j = 1; j < L; ++j) {
                const double ln = lambda[j - 1];
                const double lm = lambda[j];
                const double an = std::min(first[j - 1], horizon);
                const double am = std::min(first[j], horizon); // am <= an
                double v = 0.0;
                // both level sets quiet on (0, am)
                v += ln * (int_exp_tail(2.0 * ln, horizon, 0.0, am) -
                           2.0 * int_exp_tail(ln + lm, horizon, 0.0, am) +
                           int_exp_tail(2.0 * lm, horizon, 0.0, am));
                v += (lm - ln) * int_exp_tail(2.0 * lm, horizon, 0.0, am);
                // only the smaller level set quiet on (am, an)
                v += ln * int_exp_tail(2.0 * ln, horizon, am, an);
                form[j][i] = v;
            }
        }
    });

    TruncationStudy study;
    study.reference_level = reference_level;
    study.num_paths = num_paths;
    study.cap_tail_bound = reference.tail_probability_bound();
    for (char c : caps) study.cap_hits += static_cast<std::size_t>(c);

    std::vector<double> scratch(num_paths);
    auto second_moment = [&](const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < num_paths; ++i) {
            const double d = a[i] - b[i];
            scratch[i] = d * d;
        }
        return mean_se(scratch);
    };

    bool decreasing = true;
    for (std::size_t j = 0; j < L; ++j) {
        TruncationRow row;
        row.level = lv[j];
        row.m0 = m0[j];
        const MeanSe res = second_moment(centered[j], centered[L]);
        row.residual = res.mean;
        row.residual_se = res.se;
        row.target = (family.value_ratio > 0.0 && family.rate_ratio > 0.0 &&
                      kind == StudyPayoffKind::mark_sum)
                         ? family.tail_l2_infinite(lv[j])
                         : std::numeric_limits<double>::quiet_NaN();
        if (j > 0) {
            const MeanSe gap = second_moment(centered[j - 1], centered[j]);
            row.gap_prev = gap.mean;
            row.gap_prev_se = gap.se;
            const MeanSe fg = mean_se(form[j]);
            row.form_gap_prev = fg.mean;
            row.form_gap_prev_se = fg.se;
            if (j > 1) {
                const auto& prev = study.rows.back();
                const double slack = 3.0 * std::sqrt(prev.gap_prev_se * prev.gap_prev_se +
                                                     gap.se * gap.se);
                if (gap.mean > prev.gap_prev + slack) decreasing = false;
            }
        }
        study.rows.push_back(row);
    }
    study.gaps_decreasing = decreasing;
    return study;
}

std::vector<ProjectionRow> l2_projection_test(const MultiJumpModel& model,
                                              std::span<const double> clip_levels,
                                              std::size_t num_paths, std::size_t check_paths,
                                              std::uint64_t seed, int threads) {
    if (!model.is_compound_poisson())
        throw ScenarioError("projection test needs a compound Poisson model");
    if (clip_levels.empty()) throw ValidationError("need at least one clip level");

    const auto& marks = model.marks();
    std::vector<double> weights;
    double step = std::numeric_limits<double>::infinity();
    for (const auto& m : marks.marks()) {
        weights.push_back(m.value);
        if (m.value != 0.0) step = std::min(step, std::fabs(m.value));
    }
    if (!std::isfinite(step)) step = 1.0;

    std::vector<MarkovRepresentation> reps;
    std::vector<PathPayoff> payoffs;
    reps.reserve(clip_levels.size());
    for (double clip : clip_levels) {
        MarkStatPayoff payoff{"clip", weights,
                              [clip](double x) { return std::clamp(x, -clip, clip); }, step};
        reps.emplace_back(model, payoff);
        payoffs.push_back(payoff.as_path_payoff());
    }

    std::vector<std::vector<double>> centered(clip_levels.size(),
                                              std::vector<double>(num_paths));
    for_each_path(model, num_paths, seed, threads,
                  [&](std::size_t i, const JumpPath& path, bool) {
        for (std::size_t j = 0; j < payoffs.size(); ++j)
            centered[j][i] = payoffs[j](path) - reps[j].m0();
    });

    // pathwise representation residual via the generic integrator
    std::vector<double> rep_error(clip_levels.size(), 0.0);
    {
        const TimeGrid grid = model.grid();
        std::vector<PredictableField> fields;
        for (const auto& rep : reps) fields.push_back(rep.integrand());
        for (std::size_t p = 0; p < check_paths; ++p) {
            CounterStream rng(seed ^ 0x5ca1ab1eull, p, stream_tag::events);
            const JumpPath path = model.sample_path(rng);
            for (std::size_t j = 0; j < reps.size(); ++j) {
                const auto x =
                    stochastic_integral(fields[j], path, model.compensator(), grid);
                const double err =
                    std::fabs(x.terminal() - (payoffs[j](path) - reps[j].m0()));
                rep_error[j] = std::max(rep_error[j], err);
            }
        }
    }

    std::vector<ProjectionRow> rows;
    std::vector<double> scratch(num_paths);
    for (std::size_t j = 0; j < clip_levels.size(); ++j) {
        ProjectionRow row;
        row.level = clip_levels[j];
        row.m0 = reps[j].m0();
        row.representation_error = rep_error[j];
        if (j > 0) {
            for (std::size_t i = 0; i < num_paths; ++i) {
                const double d = centered[j][i] - centered[j - 1][i];
                scratch[i] = d * d;
            }
            const MeanSe gap = mean_se(scratch);
            row.gap_prev = gap.mean;
            row.gap_prev_se = gap.se;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<ProjectionRow> l2_projection_test(const DiscreteModel& model,
                                              const PathPayoff& payoff,
                                              std::span<const int> quantization_bits) {
    if (quantization_bits.empty()) throw ValidationError("need at least one refinement");

    std::vector<ProjectionRow> rows;
    std::vector<double> previous_centered;

    for (std::size_t j = 0; j < quantization_bits.size(); ++j) {
        const double scale = std::pow(2.0, quantization_bits[j]);
        const auto base = payoff.fn;
        PathPayoff quantized{"quantized", [base, scale](const JumpPath& p) {
                                 return std::round(base(p) * scale) / scale;
                             }};
        EnumerationOracle oracle(model, quantized);

        std::vector<double> cur;
        std::vector<double> pr;
        oracle.for_each_leaf([&](std::span<const int>, double p, const JumpPath& path) {
            cur.push_back(quantized(path) - oracle.m0());
            pr.push_back(p);
        });

        ProjectionRow row;
        row.level = static_cast<double>(quantization_bits[j]);
        row.m0 = oracle.m0();
        row.representation_error = oracle.representation_residual();
        if (j > 0) {
            double gap = 0.0;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                const double d = cur[i] - previous_centered[i];
                gap += pr[i] * d * d;
            }
            row.gap_prev = gap; // exact expectation, no standard error
            row.gap_prev_se = 0.0;
        }
        previous_centered = std::move(cur);
        rows.push_back(row);
    }
    return rows;
}

} // namespace jumprep
