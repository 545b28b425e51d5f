#pragma once

#include "jumprep/marks.hpp"

#include <functional>
#include <utility>

namespace jumprep {

/// A predictable field W(t, z). Evaluation receives the strict past of the
/// path, so history-dependent integrands stay measurable by construction;
/// deterministic fields ignore it.
class PredictableField {
public:
    using Fn = std::function<double(double, std::size_t, PathView)>;

    PredictableField() = default;

    static PredictableField constant(double v) {
        PredictableField f;
        f.fn_ = [v](double, std::size_t, PathView) { return v; };
        return f;
    }

    static PredictableField deterministic(std::function<double(double, std::size_t)> g) {
        PredictableField f;
        f.fn_ = [g = std::move(g)](double t, std::size_t z, PathView) { return g(t, z); };
        return f;
    }

    static PredictableField with_history(Fn g) {
        PredictableField f;
        f.fn_ = std::move(g);
        f.history_dependent_ = true;
        return f;
    }

    double operator()(double t, std::size_t mark, PathView past = {}) const {
        return fn_(t, mark, past);
    }

    bool history_dependent() const { return history_dependent_; }
    explicit operator bool() const { return static_cast<bool>(fn_); }

    /// a*X + b*Y, used by the linearity property tests.
    static PredictableField axpby(double a, PredictableField x, double b, PredictableField y) {
        PredictableField f;
        f.history_dependent_ = x.history_dependent_ || y.history_dependent_;
        f.fn_ = [a, x = std::move(x), b, y = std::move(y)](double t, std::size_t z,
                                                           PathView past) {
            return a * x(t, z, past) + b * y(t, z, past);
        };
        return f;
    }

private:
    Fn fn_;
    bool history_dependent_ = false;
};

} // namespace jumprep
