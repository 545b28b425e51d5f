#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace jumprep {

/// Uniform time grid on [0, horizon] with `steps` cells (steps+1 nodes).
struct TimeGrid {
    double horizon = 1.0;
    std::size_t steps = 512;

    double dt() const { return horizon / static_cast<double>(steps); }
    double node(std::size_t i) const {
        return horizon * static_cast<double>(i) / static_cast<double>(steps);
    }
    /// Index of the cell containing t, clamped to [0, steps-1].
    std::size_t cell_of(double t) const;
};

/// 3-point Gauss-Legendre quadrature of f on [a, b].
double gauss3(const std::function<double(double)>& f, double a, double b);

/// Running integral table: out[i] = integral of f over [0, node(i)],
/// accumulated cell by cell with gauss3.
std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        const TimeGrid& grid);

/// Value of the running integral at arbitrary t, completing the partial cell
/// with gauss3. `table` must come from cumulative_integral(f, grid).
double cumulative_at(const std::vector<double>& table, const TimeGrid& grid,
                     const std::function<double(double)>& f, double t);

} // namespace jumprep
