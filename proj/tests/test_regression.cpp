#include <doctest.h>

#include <cmath>
#include <random>

#include "cvsnpm/regression.hpp"
#include "oracle.hpp"

using namespace cvsnpm;

namespace {

Dataset random_dataset(std::size_t m, std::size_t n, std::uint64_t seed, double mean = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(mean, 1.0);
    Dataset data;
    data.columns.assign(n, {});
    for (std::size_t c = 0; c < n; ++c) {
        data.names.push_back("v" + std::to_string(c));
        data.columns[c].resize(m);
        for (auto& v : data.columns[c]) v = normal(rng);
    }
    return data;
}

} // namespace

TEST_CASE("TripleIndex canonicalizes and rejects duplicates") {
    const TripleIndex t(5, 1, 3);
    CHECK(t.i == 1);
    CHECK(t.j == 3);
    CHECK(t.k == 5);
    CHECK_THROWS_AS(TripleIndex(0, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(TripleIndex(2, 2, 2), InvalidArgument);
}

TEST_CASE("solve_normal_equations on the identity") {
    const std::array<std::array<double, 3>, 3> gram{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    const auto x = solve_normal_equations(gram, {2.0, -0.5, 1.0});
    CHECK(x[0] == 2.0);
    CHECK(x[1] == -0.5);
    CHECK(x[2] == 1.0);
}

TEST_CASE("solve_normal_equations recovers an exact linear target") {
    // y = x + z over four points; expected solution frozen from the
    // generic QR oracle on the same design.
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> z{2, 1, 0, 1};
    std::vector<double> y(4);
    for (std::size_t r = 0; r < 4; ++r) y[r] = x[r] + z[r];

    const auto expected = oracle::qr_lstsq(x, z, y);
    CHECK(expected[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expected[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expected[2] == doctest::Approx(0.0).epsilon(1e-12));

    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t r = 0; r < a.size(); ++r) s += a[r] * b[r];
        return s;
    };
    auto sum = [](const std::vector<double>& a) {
        double s = 0.0;
        for (double v : a) s += v;
        return s;
    };
    const std::array<std::array<double, 3>, 3> gram{{
        {dot(x, x), dot(x, z), sum(x)},
        {dot(x, z), dot(z, z), sum(z)},
        {sum(x), sum(z), 4.0},
    }};
    const auto solution = solve_normal_equations(gram, {dot(y, x), dot(y, z), sum(y)});
    for (int c = 0; c < 3; ++c) {
        CHECK(solution[static_cast<std::size_t>(c)] ==
              doctest::Approx(expected[static_cast<std::size_t>(c)]).epsilon(1e-9));
    }
}

TEST_CASE("duplicated parent columns are degenerate") {
    Dataset data = random_dataset(50, 3, 42);
    data.columns[2] = data.columns[1]; // v_j = v_k
    CHECK_THROWS_AS(fit_triple(data, TripleIndex(0, 1, 2)), DegenerateTriple);
}

TEST_CASE("fit_triple recovers a noise-free construction") {
    Dataset data = random_dataset(200, 3, 7);
    for (std::size_t r = 0; r < 200; ++r) {
        data.columns[2][r] = 2.0 * data.columns[0][r] - 0.5 * data.columns[1][r] + 1.0;
    }
    const TripleFit fit = fit_triple(data, TripleIndex(0, 1, 2));
    const SingleFit& target_k = fit.targeting(2);
    CHECK(target_k.coeffs[0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(target_k.coeffs[1] == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(target_k.intercept == doctest::Approx(1.0).epsilon(1e-8));
    for (const auto& single : fit.fits) CHECK(residual_sum_ok(single));
}

TEST_CASE("independent columns give near-zero coefficients") {
    const Dataset data = random_dataset(100000, 3, 99);
    const TripleFit fit = fit_triple(data, TripleIndex(0, 1, 2));
    for (const auto& single : fit.fits) {
        CHECK(std::abs(single.coeffs[0]) < 0.05);
        CHECK(std::abs(single.coeffs[1]) < 0.05);
    }
}

TEST_CASE("malformed triple index is rejected") {
    const Dataset data = random_dataset(50, 3, 3);
    CHECK_THROWS_AS(fit_triple(data, TripleIndex(0, 1, 1)), InvalidArgument);
    CHECK_THROWS_AS(fit_triple(data, TripleIndex(0, 1, 7)), InvalidArgument);
}

TEST_CASE("residual sums vanish on random data") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Dataset data = random_dataset(50, 4, seed, 1.5);
        const TripleFit fit = fit_triple(data, TripleIndex(0, 2, 3));
        for (const auto& single : fit.fits) CHECK(residual_sum_ok(single));
    }
}

TEST_CASE("index order does not change the six coefficients") {
    const Dataset data = random_dataset(80, 5, 17);
    const TripleFit a = fit_triple(data, TripleIndex(0, 2, 4));
    const TripleFit b = fit_triple(data, TripleIndex(4, 0, 2));
    for (std::size_t target : {0u, 2u, 4u}) {
        const auto& fa = a.targeting(target);
        const auto& fb = b.targeting(target);
        CHECK(fa.parents == fb.parents);
        CHECK(fa.coeffs == fb.coeffs);
        CHECK(fa.intercept == fb.intercept);
    }
}

TEST_CASE("fits match the generic QR oracle") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const Dataset data = random_dataset(50, 3, seed, 0.7);
        const TripleFit fit = fit_triple(data, TripleIndex(0, 1, 2));
        for (const auto& single : fit.fits) {
            const auto expected =
                oracle::qr_lstsq(data.columns[single.parents[0]],
                                 data.columns[single.parents[1]], data.columns[single.target]);
            CHECK(single.coeffs[0] == doctest::Approx(expected[0]).epsilon(1e-6));
            CHECK(single.coeffs[1] == doctest::Approx(expected[1]).epsilon(1e-6));
            CHECK(single.intercept == doctest::Approx(expected[2]).epsilon(1e-6));
        }
    }
}

TEST_CASE("cached moments give the same fits as the direct path") {
    const Dataset data = random_dataset(60, 5, 55, 2.0);
    const Moments moments = Moments::of(data);
    const TripleFit direct = fit_triple(data, TripleIndex(1, 2, 4));
    const TripleFit cached = fit_triple(moments, TripleIndex(1, 2, 4));
    for (std::size_t f = 0; f < 3; ++f) {
        CHECK(direct.fits[f].coeffs == cached.fits[f].coeffs);
        CHECK(direct.fits[f].intercept == cached.fits[f].intercept);
    }
}
