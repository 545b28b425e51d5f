#include "doctest.h"

#include "jumprep/rng.hpp"

#include <cmath>
#include <vector>

using namespace jumprep;

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference outputs from the Random123 kat_vectors file.
    auto zero = philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(zero[0] == 0x6627e8d5u);
    CHECK(zero[1] == 0xe169c58du);
    CHECK(zero[2] == 0xbc57ac4cu);
    CHECK(zero[3] == 0x9b00dbd8u);

    auto ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                           {0xffffffffu, 0xffffffffu});
    CHECK(ones[0] == 0x408f276du);
    CHECK(ones[1] == 0x41c83b0eu);
    CHECK(ones[2] == 0xa20bc7c6u);
    CHECK(ones[3] == 0x6d5451fdu);

    auto pi = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                         {0xa4093822u, 0x299f31d0u});
    CHECK(pi[0] == 0xd16cfe09u);
    CHECK(pi[1] == 0x94fdccebu);
    CHECK(pi[2] == 0x5001e420u);
    CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and distinct per path index") {
    CounterStream a(42, 7, stream_tag::events);
    CounterStream b(42, 7, stream_tag::events);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    CounterStream c(42, 8, stream_tag::events);
    CHECK(CounterStream(42, 7, stream_tag::events).next_u64() != c.next_u64());
}

TEST_CASE("inverse normal cdf hits reference quantiles") {
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.84134474606854293) == doctest::Approx(1.0).epsilon(1e-10));
    for (double p : {1e-10, 1e-4, 0.3, 0.5, 0.77, 1.0 - 1e-7}) {
        CHECK(normal_cdf(inverse_normal_cdf(p)) == doctest::Approx(p).epsilon(1e-11));
    }
}

TEST_CASE("normal and exponential moments") {
    CounterStream rng(2024, 0, stream_tag::events);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::fabs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));

    double esum = 0.0;
    for (int i = 0; i < n; ++i) esum += rng.exponential(2.0);
    CHECK(esum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("poisson matches mean and variance, including split means") {
    CounterStream rng(7, 3, stream_tag::counts);
    for (double mean : {0.3, 4.0, 37.5, 900.0}) {
        const int n = 20000;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double k = static_cast<double>(rng.poisson(mean));
            s += k;
            s2 += k * k;
        }
        const double mhat = s / n;
        const double vhat = s2 / n - mhat * mhat;
        const double se = std::sqrt(mean / n);
        CHECK(std::fabs(mhat - mean) < 5.0 * se);
        CHECK(vhat == doctest::Approx(mean).epsilon(0.1));
    }
}

TEST_CASE("categorical respects the weight table") {
    CounterStream rng(11, 0, stream_tag::marks);
    const std::vector<double> cumulative{0.2, 0.5, 1.0};
    std::vector<int> counts(3, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[rng.categorical(cumulative.data(), 3)];
    CHECK(counts[0] / double(n) == doctest::Approx(0.2).epsilon(0.05));
    CHECK(counts[1] / double(n) == doctest::Approx(0.3).epsilon(0.05));
    CHECK(counts[2] / double(n) == doctest::Approx(0.5).epsilon(0.05));
}
