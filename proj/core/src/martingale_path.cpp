#include "jumprep/martingale_path.hpp"

#include "jumprep/errors.hpp"

#include <algorithm>

namespace jumprep {

MartingalePath::MartingalePath(double initial, std::vector<PathPoint> points)
    : initial_(initial), points_(std::move(points)) {
    if (points_.empty() || points_.front().t != 0.0)
        throw ValidationError("MartingalePath must start with a point at t = 0");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (points_[i].t <= points_[i - 1].t)
            throw ValidationError("MartingalePath points must be strictly time-sorted");
}

double MartingalePath::at(double t) const {
    if (t < points_.front().t) return initial_;
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double x, const PathPoint& p) { return x < p.t; });
    return std::prev(it)->value;
}

double MartingalePath::left_at(double t) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), t,
                               [](const PathPoint& p, double x) { return p.t < x; });
    if (it == points_.begin()) return initial_;
    if (it != points_.end() && it->t == t) return it->value - it->jump;
    return std::prev(it)->value;
}

double MartingalePath::terminal() const { return points_.back().value; }

double MartingalePath::quadratic_variation(double t) const {
    double qv = 0.0;
    for (const auto& p : points_) {
        if (p.t > t) break;
        qv += p.jump * p.jump;
    }
    return qv;
}

} // namespace jumprep
