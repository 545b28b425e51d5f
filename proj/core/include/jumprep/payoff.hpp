#pragma once

#include "jumprep/marks.hpp"

#include <functional>
#include <string>

namespace jumprep {

/// Terminal payoff of a single-jump measure: h(T, Z) when the jump happens,
/// h_infinity on {T = infinity}. center_payoff produces the centered version
/// and records the removed mean as m0.
class PayoffFunctional {
public:
    using Fn = std::function<double(double, std::size_t)>;

    PayoffFunctional(Fn h, double at_infinity)
        : h_(std::move(h)), at_infinity_(at_infinity) {}

    double operator()(double t, std::size_t mark) const { return h_(t, mark); }
    double at_infinity() const { return at_infinity_; }
    bool centered() const { return centered_; }
    /// Mean removed by center_payoff; 0 for raw payoffs.
    double m0() const { return m0_; }

    static PayoffFunctional centered_from(Fn h, double at_infinity, double m0) {
        PayoffFunctional p(std::move(h), at_infinity);
        p.centered_ = true;
        p.m0_ = m0;
        return p;
    }

private:
    Fn h_;
    double at_infinity_ = 0.0;
    bool centered_ = false;
    double m0_ = 0.0;
};

/// Real functional of a whole jump path up to its horizon.
struct PathPayoff {
    std::string name;
    std::function<double(const JumpPath&)> fn;

    double operator()(const JumpPath& path) const { return fn(path); }
};

/// Terminal view of a single-jump payoff as a path functional.
inline PathPayoff terminal_payoff(const PayoffFunctional& h) {
    return PathPayoff{"terminal", [h](const JumpPath& path) {
                          if (path.events.empty()) return h.at_infinity();
                          const auto& e = path.events.front();
                          return h(e.time, e.mark);
                      }};
}

} // namespace jumprep
