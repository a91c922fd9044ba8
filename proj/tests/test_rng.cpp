#include "gmp/rng.hpp"
#include "gmp/sampler.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

TEST_CASE("philox known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    CHECK(gmp::philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) ==
          A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(gmp::philox4x32(A4{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          A2{0xffffffffu, 0xffffffffu}) ==
          A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(gmp::philox4x32(A4{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          A2{0xa4093822u, 0x299f31d0u}) ==
          A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("keyed draws are pure functions of the key") {
    const gmp::KeyScope a{7, 3};
    CHECK(gmp::keyed_normal(a, {4, 5}) == gmp::keyed_normal(a, {4, 5}));
    CHECK(gmp::keyed_normal(a, {4, 5}) != gmp::keyed_normal(a, {4, 6}));
    CHECK(gmp::keyed_normal(a, {4, 5}) != gmp::keyed_normal({7, 4}, {4, 5}));
    CHECK(gmp::keyed_normal(a, {4, 5}) != gmp::keyed_normal({8, 3}, {4, 5}));
    CHECK(gmp::keyed_normal({0, std::uint64_t{1} << 40}, {1, 0}) !=
          gmp::keyed_normal({0, 0}, {1, 0}));

    const auto t1 = gmp::sample_coefficients(a, 6);
    const auto t2 = gmp::sample_coefficients(a, 6);
    const auto t3 = gmp::sample_coefficients(a, 7);
    CHECK(t1.xi == t2.xi);
    REQUIRE(t3.xi.size() == 2 * t1.xi.size());
    for (std::size_t i = 0; i < t1.xi.size(); ++i) {
        CHECK(t1.xi[i] == t3.xi[i]);
    }
    CHECK(t1[{3, 2}] == gmp::keyed_normal(a, {3, 2}));
}

TEST_CASE("uniforms lie strictly inside the unit interval") {
    for (std::uint64_t p = 0; p < 20000; ++p) {
        const double u = gmp::keyed_uniform({1, p}, {2, 1});
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal quantile") {
    CHECK(gmp::normal_quantile(0.5) == 0.0);
    CHECK(gmp::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
    CHECK(gmp::normal_quantile(1e-300) < -37.0);
    for (double p : {1e-9, 0.01, 0.3, 0.9}) {
        CHECK(oracle::normal_cdf(gmp::normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("normal moments across path ids") {
    constexpr int kDraws = 100000;
    for (const gmp::NodeIndex node : {gmp::NodeIndex{0, 0}, gmp::NodeIndex{5, 9}}) {
        double sum = 0.0;
        double sq = 0.0;
        for (int p = 0; p < kDraws; ++p) {
            const double x = gmp::keyed_normal({2024, static_cast<std::uint64_t>(p)}, node);
            sum += x;
            sq += x * x;
        }
        const double mean = sum / kDraws;
        const double var = (sq - kDraws * mean * mean) / (kDraws - 1);
        CHECK(std::abs(mean) <= 0.02);
        CHECK(std::abs(var - 1.0) <= 0.03);
    }
}

TEST_CASE("KS rejections across keys follow the nominal rate") {
    // 400 independent KS tests at level 0.05: the rejection count is
    // Binomial(400, 0.05), mean 20, sd 4.36.
    constexpr int kTests = 400;
    constexpr std::size_t kDraws = 10000;
    int rejected = 0;
    for (int i = 0; i < kTests; ++i) {
        const gmp::KeyScope base{static_cast<std::uint64_t>(i / 20), 0};
        const gmp::NodeIndex node = gmp::node_from_flat(1 + 7 * (i % 20));
        std::vector<double> z(kDraws);
        for (std::size_t p = 0; p < kDraws; ++p) {
            z[p] = gmp::keyed_normal({base.master_seed, p}, node);
        }
        rejected += oracle::ks_statistic(z) > 1.3581 / std::sqrt(static_cast<double>(kDraws)) ? 1 : 0;
    }
    CHECK(rejected >= 3);
    CHECK(rejected <= 38);
}
