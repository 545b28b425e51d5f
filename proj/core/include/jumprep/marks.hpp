#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jumprep {

/// Index reserved for "no mark"; pairs with an infinite event time.
inline constexpr std::size_t kNoMark = std::numeric_limits<std::size_t>::max();

struct Mark {
    std::string label;
    double value = 0.0; // attached real value, e.g. the jump size
};

/// Finite ordered mark alphabet plus a sentinel label kept outside of it.
class MarkSpace {
public:
    MarkSpace() = default;
    explicit MarkSpace(std::vector<Mark> marks, std::string sentinel = "none");

    std::size_t size() const { return marks_.size(); }
    const Mark& at(std::size_t i) const;
    std::span<const Mark> marks() const { return marks_; }
    const std::string& sentinel() const { return sentinel_; }

    /// ValidationError for labels outside the alphabet.
    std::size_t index_of(const std::string& label) const;
    bool contains(const std::string& label) const;

private:
    std::vector<Mark> marks_;
    std::string sentinel_ = "none";
};

struct JumpEvent {
    double time = std::numeric_limits<double>::infinity();
    std::size_t mark = kNoMark;

    static JumpEvent none() { return {}; }
    bool is_jump() const { return std::isfinite(time); }
};

/// One realization of an integer-valued random measure: finitely many events
/// with strictly increasing finite times, observed up to `horizon`.
struct JumpPath {
    std::vector<JumpEvent> events;
    double horizon = 1.0;

    /// mu([0,t] x {mark})
    std::size_t count(double t, std::size_t mark) const;
    std::size_t count(double t) const; // all marks
};

/// The strict past handed to predictable evaluations: only events with
/// time < evaluation time may appear here.
struct PathView {
    std::span<const JumpEvent> events;

    bool empty() const { return events.empty(); }
    std::size_t size() const { return events.size(); }
    /// Sum of weight[mark] over past events.
    double statistic(std::span<const double> weight) const;
};

/// Events of `path` strictly before t.
PathView strict_past(const JumpPath& path, double t);
/// Events of `path` with time <= t (for evaluating a field just after t).
PathView past_through(const JumpPath& path, double t);

struct PathViolation {
    enum class Kind {
        negative_time,
        non_finite_time,
        duplicate_time,
        decreasing_time,
        beyond_horizon,
        unknown_mark,
    };
    Kind kind;
    std::size_t event_index;
    std::string message;
};

/// Structural check of the integer-valued-measure invariants; returns the
/// first violation found, or nullopt when the path is well formed.
std::optional<PathViolation> validate_path(const JumpPath& path, const MarkSpace& marks);

} // namespace jumprep
