#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace jumprep {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n). Work items must write only to their own slots;
/// callers reduce afterwards in index order, so results do not depend on the
/// worker count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t)>& fn) {
    const int workers = resolve_threads(threads);
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = static_cast<std::size_t>(w); i < n;
                 i += static_cast<std::size_t>(workers))
                fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Neumaier compensated sum in index order; deterministic for a fixed input.
inline double stable_sum(const std::vector<double>& values) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

/// Sample mean and standard error, reduced in index order.
inline MeanSe mean_se(const std::vector<double>& values) {
    MeanSe out;
    out.n = values.size();
    if (out.n == 0) return out;
    out.mean = stable_sum(values) / static_cast<double>(out.n);
    if (out.n < 2) return out;
    double ss = 0.0;
    for (double v : values) {
        const double d = v - out.mean;
        ss += d * d;
    }
    out.se = std::sqrt(ss / (static_cast<double>(out.n) * (static_cast<double>(out.n) - 1.0)));
    return out;
}

} // namespace jumprep
