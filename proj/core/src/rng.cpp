#include "jumprep/rng.hpp"

#include "jumprep/errors.hpp"

#include <cmath>

namespace jumprep {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> round_once(std::array<std::uint32_t, 4> ctr,
                                               const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        counter = round_once(counter, key);
    }
    return counter;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t path_index, std::uint32_t tag)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      prefix_{static_cast<std::uint32_t>(path_index),
              static_cast<std::uint32_t>(path_index >> 32), tag} {}

void CounterStream::refill() {
    buffer_ = philox4x32({prefix_[0], prefix_[1], prefix_[2], block_}, key_);
    ++block_;
    position_ = 0;
}

std::uint32_t CounterStream::next_u32() {
    if (position_ >= 4) refill();
    return buffer_[position_++];
}

std::uint64_t CounterStream::next_u64() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
}

double CounterStream::uniform01() {
    // 53-bit mantissa, offset by half an ulp so the result is never 0 or 1.
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double CounterStream::normal() { return inverse_normal_cdf(uniform01()); }

double CounterStream::exponential(double rate) {
    if (!(rate > 0.0)) throw ValidationError("exponential draw requires rate > 0");
    return -std::log(uniform01()) / rate;
}

std::uint64_t CounterStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw ValidationError("poisson draw requires a finite nonnegative mean");
    std::uint64_t total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double m = remaining > 256.0 ? 256.0 : remaining;
        remaining -= m;
        // CDF inversion with one uniform.
        const double u = uniform01();
        double p = std::exp(-m);
        double cdf = p;
        std::uint64_t k = 0;
        while (u > cdf && k < 4096) {
            ++k;
            p *= m / static_cast<double>(k);
            cdf += p;
        }
        total += k;
    }
    return total;
}

std::size_t CounterStream::categorical(const double* cumulative, std::size_t n) {
    if (n == 0) throw ValidationError("categorical draw over an empty table");
    const double u = uniform01() * cumulative[n - 1];
    std::size_t lo = 0;
    std::size_t hi = n - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (u < cumulative[mid])
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("inverse_normal_cdf requires p in (0,1)");
    static constexpr double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2,  1.9715909503065514427e3,
        1.3731693765509461125e4,  4.5921953931549871457e4,  6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static constexpr double b[8] = {
        1.0,                      4.2313330701600911252e1,  6.8718700749205790830e2,
        5.3941960214247511077e3,  2.1213794301586595867e4,  3.9307895800092710610e4,
        2.8729085735721942674e4,  5.2264952788528545610e3};
    static constexpr double c[8] = {
        1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
        3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {
        1.0,                      2.05319162663775882187e0, 1.67638483018380384940e0,
        6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static constexpr double e[8] = {
        6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {
        1.0,                      5.99832206555887937690e-1, 1.36929880922735805310e-1,
        1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    auto poly = [](const double* k, double x) {
        double r = k[7];
        for (int i = 6; i >= 0; --i) r = r * x + k[i];
        return r;
    };

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, r) / poly(b, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = poly(c, r) / poly(d, r);
    } else {
        r -= 5.0;
        value = poly(e, r) / poly(f, r);
    }
    return q < 0.0 ? -value : value;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

} // namespace jumprep
