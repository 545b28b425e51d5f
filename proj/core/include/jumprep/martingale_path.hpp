#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jumprep {

struct PathPoint {
    double t = 0.0;
    double value = 0.0; // cadlag value at t
    double jump = 0.0;  // value minus left limit; 0 at continuous points
};

/// Cadlag piecewise path recorded on a breakpoint set (grid nodes, event and
/// atom times). Queries are exact at breakpoints; between them the path is
/// read as constant from the latest breakpoint.
class MartingalePath {
public:
    MartingalePath() = default;
    MartingalePath(double initial, std::vector<PathPoint> points);

    double initial() const { return initial_; }
    double at(double t) const;
    double left_at(double t) const;
    double terminal() const;
    std::span<const PathPoint> points() const { return points_; }

    /// Optional quadratic variation of the scalar path: sum of squared jumps
    /// up to t.
    double quadratic_variation(double t) const;

private:
    double initial_ = 0.0;
    std::vector<PathPoint> points_; // sorted by t, first at t = 0
};

} // namespace jumprep
