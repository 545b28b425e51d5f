#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace jumprep {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw; SC'11).
// A draw is a pure function of (key, counter), so Monte Carlo code can hand
// every (path, purpose) pair its own stream and stay reproducible under any
// parallel schedule.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Stream tags keep draws for different purposes out of each other's way even
// when they share a path index.
namespace stream_tag {
inline constexpr std::uint32_t events = 0x01;
inline constexpr std::uint32_t marks = 0x02;
inline constexpr std::uint32_t thinning = 0x03;
inline constexpr std::uint32_t brownian = 0x04;
inline constexpr std::uint32_t counts = 0x05;
inline constexpr std::uint32_t scramble = 0x06;
} // namespace stream_tag

/// One logical random stream, addressed by (seed, path_index, stream_tag).
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t path_index, std::uint32_t tag);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform draw strictly inside (0,1).
    double uniform01();
    /// Standard normal via the inverse CDF; exactly one uniform per draw.
    double normal();
    double exponential(double rate);
    /// Exact Poisson count by CDF inversion; large means are split into
    /// chunks of at most 256 and superposed.
    std::uint64_t poisson(double mean);
    /// Index into a cumulative weight table (strictly increasing, last = total).
    std::size_t categorical(const double* cumulative, std::size_t n);

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 3> prefix_;
    std::uint32_t block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int position_ = 4;

    void refill();
};

/// Wichura's PPND16 (AS 241); |error| < 1e-15 for p in (0,1).
double inverse_normal_cdf(double p);
double normal_cdf(double x);
double normal_pdf(double x);

} // namespace jumprep
