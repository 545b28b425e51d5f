#include "jumprep/marks.hpp"

#include "jumprep/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace jumprep {

MarkSpace::MarkSpace(std::vector<Mark> marks, std::string sentinel)
    : marks_(std::move(marks)), sentinel_(std::move(sentinel)) {
    if (marks_.empty()) throw ValidationError("MarkSpace must be nonempty");
    std::unordered_set<std::string> seen;
    for (const auto& m : marks_) {
        if (!seen.insert(m.label).second)
            throw ValidationError("MarkSpace labels must be distinct: " + m.label);
        if (m.label == sentinel_)
            throw ValidationError("sentinel label collides with a mark: " + sentinel_);
    }
}

const Mark& MarkSpace::at(std::size_t i) const {
    if (i >= marks_.size()) throw ValidationError("mark index out of range");
    return marks_[i];
}

std::size_t MarkSpace::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < marks_.size(); ++i)
        if (marks_[i].label == label) return i;
    throw ValidationError("unknown mark label: " + label);
}

bool MarkSpace::contains(const std::string& label) const {
    return std::any_of(marks_.begin(), marks_.end(),
                       [&](const Mark& m) { return m.label == label; });
}

std::size_t JumpPath::count(double t, std::size_t mark) const {
    std::size_t n = 0;
    for (const auto& e : events) {
        if (e.time > t) break;
        if (e.mark == mark) ++n;
    }
    return n;
}

std::size_t JumpPath::count(double t) const {
    std::size_t n = 0;
    for (const auto& e : events) {
        if (e.time > t) break;
        ++n;
    }
    return n;
}

double PathView::statistic(std::span<const double> weight) const {
    double x = 0.0;
    for (const auto& e : events)
        if (e.mark < weight.size()) x += weight[e.mark];
    return x;
}

PathView strict_past(const JumpPath& path, double t) {
    std::size_t n = 0;
    while (n < path.events.size() && path.events[n].time < t) ++n;
    return PathView{std::span<const JumpEvent>(path.events.data(), n)};
}

PathView past_through(const JumpPath& path, double t) {
    std::size_t n = 0;
    while (n < path.events.size() && path.events[n].time <= t) ++n;
    return PathView{std::span<const JumpEvent>(path.events.data(), n)};
}

std::optional<PathViolation> validate_path(const JumpPath& path, const MarkSpace& marks) {
    using Kind = PathViolation::Kind;
    double previous = -1.0;
    for (std::size_t i = 0; i < path.events.size(); ++i) {
        const auto& e = path.events[i];
        if (std::isnan(e.time) || std::isinf(e.time))
            return PathViolation{Kind::non_finite_time, i, "event time is not finite"};
        if (e.time < 0.0)
            return PathViolation{Kind::negative_time, i, "event time is negative"};
        if (e.time > path.horizon)
            return PathViolation{Kind::beyond_horizon, i, "event time beyond horizon"};
        if (i > 0 && e.time == previous)
            return PathViolation{Kind::duplicate_time, i,
                                 "two events share one time point"};
        if (i > 0 && e.time < previous)
            return PathViolation{Kind::decreasing_time, i, "event times must increase"};
        if (e.mark >= marks.size())
            return PathViolation{Kind::unknown_mark, i, "event mark outside the mark space"};
        previous = e.time;
    }
    return std::nullopt;
}

} // namespace jumprep
