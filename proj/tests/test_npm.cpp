#include <doctest.h>

#include <cmath>
#include <random>

#include "cvsnpm/npm.hpp"
#include "oracle.hpp"

using namespace cvsnpm;

namespace {

// The worked single-row example 10 = 2.37 * 5.45 - 2.92 as a fit.
SingleFit worked_example_fit() {
    SingleFit fit;
    fit.target = 0;
    fit.parents = {1, 2};
    fit.coeffs = {2.37, 0.0};
    fit.intercept = -2.92;
    fit.sum_target = 10.0;
    fit.sum_parent1 = 5.45;
    fit.sum_parent2 = 0.0;
    fit.rows = 1;
    return fit;
}

std::array<double, 3> random_raw(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    std::array<double, 3> raw{};
    do {
        for (auto& v : raw) v = unif(rng);
    } while (raw[0] == 0.0 && raw[1] == 0.0 && raw[2] == 0.0);
    return raw;
}

} // namespace

TEST_CASE("worked example: signed percentage contributions") {
    const auto raw = percent_contributions(worked_example_fit(), 1e-12);
    CHECK(raw[0] == doctest::Approx(1.292).epsilon(1e-3));
    CHECK(raw[1] == 0.0);
    CHECK(raw[2] == doctest::Approx(-0.292).epsilon(1e-9));
    // The example's constants are rounded, so the decomposition only
    // sums to 1 approximately (2.37 * 5.45 - 2.92 = 9.9965).
    CHECK(raw[0] + raw[1] + raw[2] == doctest::Approx(0.99965).epsilon(1e-9));
}

TEST_CASE("worked example: mapped image") {
    const auto mapped = npm_map(percent_contributions(worked_example_fit(), 1e-12));
    CHECK(mapped[0] == doctest::Approx(1.292 / 1.584).epsilon(1e-3));
    CHECK(mapped[1] == 0.0);
    CHECK(mapped[2] == doctest::Approx(0.292 / 1.584).epsilon(1e-3));
}

TEST_CASE("identity model contributes everything through its parent") {
    SingleFit fit;
    fit.coeffs = {1.0, 0.0};
    fit.intercept = 0.0;
    fit.sum_target = 37.5;
    fit.sum_parent1 = 37.5;
    fit.sum_parent2 = 4.0;
    fit.rows = 10;
    const auto raw = percent_contributions(fit, 1e-12);
    CHECK(raw == std::array<double, 3>{1.0, 0.0, 0.0});
}

TEST_CASE("raw contributions of a noise-free fit sum to one") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> normal(1.0, 1.0);
    const std::size_t m = 200;
    std::vector<double> v0(m), v1(m), v2(m);
    for (std::size_t r = 0; r < m; ++r) {
        v0[r] = normal(rng);
        v1[r] = normal(rng);
        v2[r] = 2.0 * v0[r] - 0.5 * v1[r] + 1.0;
    }
    // Independent sums straight from the generated columns.
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        s0 += v0[r];
        s1 += v1[r];
        s2 += v2[r];
    }
    SingleFit fit;
    fit.coeffs = {2.0, -0.5};
    fit.intercept = 1.0;
    fit.sum_target = s2;
    fit.sum_parent1 = s0;
    fit.sum_parent2 = s1;
    fit.rows = m;
    const auto raw = percent_contributions(fit, denominator_epsilon(v2));
    CHECK(raw[0] + raw[1] + raw[2] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("degenerate denominator raises a skip signal") {
    SingleFit fit = worked_example_fit();
    fit.sum_target = 1e-13;
    CHECK_THROWS_AS(percent_contributions(fit, 1e-8), DegenerateDenominator);
}

TEST_CASE("npm_map keeps nonnegative unit-sum vectors") {
    const auto a = npm_map({0.7, 0.3, 0.0});
    CHECK(a[0] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(a[2] == 0.0);
    // Fixed point with an exactly representable sum.
    CHECK(npm_map({0.5, 0.5, 0.0}) == std::array<double, 3>{0.5, 0.5, 0.0});
    CHECK(npm_map({0.25, 0.25, 0.5}) == std::array<double, 3>{0.25, 0.25, 0.5});
}

TEST_CASE("npm_map rejects the all-zero vector") {
    CHECK_THROWS_AS(npm_map({0.0, 0.0, 0.0}), UndefinedContribution);
}

TEST_CASE("npm_map lands on the probability simplex") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto raw = random_raw(rng);
        const auto mapped = npm_map(raw);
        double sum = 0.0;
        for (double v : mapped) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("npm_map absorbs signs exactly") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto raw = random_raw(rng);
        const std::array<double, 3> flipped{-raw[0], raw[1], -raw[2]};
        CHECK(npm_map(raw) == npm_map(flipped));
    }
}

TEST_CASE("npm_map is scale invariant") {
    std::mt19937_64 rng(33);
    std::uniform_int_distribution<int> pow2(-8, 8);
    std::uniform_real_distribution<double> any_scale(0.01, 100.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto raw = random_raw(rng);
        const auto mapped = npm_map(raw);

        // Power-of-two scaling is exact in binary floating point.
        const double lambda = std::ldexp(1.0, pow2(rng));
        const std::array<double, 3> scaled{lambda * raw[0], lambda * raw[1], lambda * raw[2]};
        CHECK(npm_map(scaled) == mapped);

        // Arbitrary scaling agrees to rounding error.
        const double mu = any_scale(rng);
        const std::array<double, 3> scaled_mu{mu * raw[0], mu * raw[1], mu * raw[2]};
        const auto mapped_mu = npm_map(scaled_mu);
        for (std::size_t t = 0; t < 3; ++t) {
            CHECK(mapped_mu[t] == doctest::Approx(mapped[t]).epsilon(1e-12));
        }
    }
}

TEST_CASE("unit-sum vectors from all sign classes map onto the simplex") {
    // Entries may sit in any of [-inf,-1], [-1,0], [0,1], [1,inf] as
    // long as the vector sums to 1.
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> wide(-30.0, 30.0);
    for (int trial = 0; trial < 2000; ++trial) {
        std::array<double, 3> raw{wide(rng), wide(rng), 0.0};
        raw[2] = 1.0 - raw[0] - raw[1];
        const auto mapped = npm_map(raw);
        double sum = 0.0;
        for (double v : mapped) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}
