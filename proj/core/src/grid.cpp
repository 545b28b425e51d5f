#include "jumprep/grid.hpp"

#include "jumprep/errors.hpp"

#include <algorithm>
#include <cmath>

namespace jumprep {

std::size_t TimeGrid::cell_of(double t) const {
    if (steps == 0) throw ValidationError("TimeGrid with zero steps");
    const double x = t / dt();
    auto i = static_cast<long long>(std::floor(x));
    i = std::clamp<long long>(i, 0, static_cast<long long>(steps) - 1);
    return static_cast<std::size_t>(i);
}

double gauss3(const std::function<double(double)>& f, double a, double b) {
    static const double xi = 0.7745966692414834; // sqrt(3/5)
    static const double w0 = 8.0 / 9.0;
    static const double w1 = 5.0 / 9.0;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    return half * (w1 * f(mid - half * xi) + w0 * f(mid) + w1 * f(mid + half * xi));
}

std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        const TimeGrid& grid) {
    std::vector<double> out(grid.steps + 1, 0.0);
    for (std::size_t i = 0; i < grid.steps; ++i)
        out[i + 1] = out[i] + gauss3(f, grid.node(i), grid.node(i + 1));
    return out;
}

double cumulative_at(const std::vector<double>& table, const TimeGrid& grid,
                     const std::function<double(double)>& f, double t) {
    if (t <= 0.0) return 0.0;
    if (t >= grid.horizon) return table.back();
    const std::size_t cell = grid.cell_of(t);
    const double a = grid.node(cell);
    if (t <= a) return table[cell];
    return table[cell] + gauss3(f, a, t);
}

} // namespace jumprep
