#pragma once

#include "jumprep/compensator.hpp"
#include "jumprep/field.hpp"
#include "jumprep/grid.hpp"
#include "jumprep/marks.hpp"
#include "jumprep/martingale_path.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace jumprep {

class CounterStream;

/// A model the Monte Carlo layer can draw jump paths from.
class SimulableModel {
public:
    virtual ~SimulableModel() = default;
    virtual JumpPath sample_path(CounterStream& rng) const = 0;
    virtual const CompensatorSpec& compensator() const = 0;
    virtual TimeGrid grid() const = 0;
};

/// Pathwise integral (W * mu~)_t = sum_{events <= t} W - integral of W d(mu_p).
///
/// Event and atom contributions are exact; the hazard-density part uses the
/// left-point rule on the grid (cells split at event times), which keeps the
/// integrand evaluation predictable. Breakpoints of the result: grid nodes,
/// event times, atom times.
MartingalePath stochastic_integral(const PredictableField& W, const JumpPath& path,
                                   const CompensatorSpec& comp, const TimeGrid& grid);

enum class QvKind { optional_qv, predictable_qv };

/// Optional [mu~] or predictable <mu~> quadratic variation of one path.
///
/// eval(t, B) follows the defining display literally: masses over B are
/// aggregated per time point before squaring, so the value is exact for every
/// fixed B even where several marks carry predictable mass at one time.
/// weighted(W, t) is the quadratic form extending B |-> eval (W = I_B gives
/// eval back); for at-most-one-charged-mark times it reduces to the plain
/// integral of W^2 against the measure.
class QVMeasure {
public:
    struct TimePoint {
        double time = 0.0;
        // sparse per-mark masses at this time
        std::vector<std::pair<std::size_t, double>> mu;
        std::vector<std::pair<std::size_t, double>> mu_p;
    };
    struct Segment {
        double a = 0.0;
        double b = 0.0;
        std::vector<double> rate; // left-evaluated hazard per mark
        std::size_t past_events = 0;
    };

    QvKind kind() const { return kind_; }
    double eval(double t, std::span<const std::size_t> subset) const;
    double eval_all(double t) const;
    double weighted(const PredictableField& W, double t) const;

    std::span<const TimePoint> points() const { return points_; }
    std::span<const Segment> segments() const { return segments_; }

private:
    friend QVMeasure optional_qv(const JumpPath&, const CompensatorSpec&, const TimeGrid&);
    friend QVMeasure predictable_qv(const CompensatorSpec&, const JumpPath&, const TimeGrid&);

    QvKind kind_ = QvKind::optional_qv;
    JumpPath path_;
    std::vector<TimePoint> points_;
    std::vector<Segment> segments_; // predictable kind only
};

QVMeasure optional_qv(const JumpPath& path, const CompensatorSpec& comp, const TimeGrid& grid);
QVMeasure predictable_qv(const CompensatorSpec& comp, const JumpPath& path, const TimeGrid& grid);

/// Pathwise check of [W*mu~] = W^2*[mu~] and <W*mu~> = W^2*<mu~> at grid
/// times. The optional side compares the integral path's recorded jumps
/// against the QV atoms; the predictable side compares a direct accumulation
/// against the QVMeasure form.
struct QvCheckReport {
    double max_optional_gap = 0.0;
    double max_predictable_gap = 0.0;
};
QvCheckReport qv_pushforward_check(const PredictableField& W, const JumpPath& path,
                                   const CompensatorSpec& comp, const TimeGrid& grid);

/// Monte Carlo Ito-isometry estimate: lhs = E[(W*mu~)_H^2], rhs = E[(W^2*<mu~>)_H].
struct IsometryEstimate {
    double lhs = 0.0;
    double lhs_se = 0.0;
    double rhs = 0.0;
    double rhs_se = 0.0;
    std::size_t num_paths = 0;

    bool consistent(double se_band = 3.0) const;
};
IsometryEstimate isometry_estimate(const PredictableField& W, const SimulableModel& model,
                                   std::size_t num_paths, std::uint64_t seed, int threads = 0);

} // namespace jumprep
