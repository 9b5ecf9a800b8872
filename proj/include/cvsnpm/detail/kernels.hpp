#pragma once

#include <algorithm>
#include <cstddef>

namespace cvsnpm::detail {

// Four-way unrolled reductions. The fixed accumulation order keeps
// results deterministic while letting the compiler vectorize; every
// caller that must agree bitwise goes through these.

inline double sum(const double* v, std::size_t n) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t r = 0;
    for (; r + 4 <= n; r += 4) {
        a0 += v[r];
        a1 += v[r + 1];
        a2 += v[r + 2];
        a3 += v[r + 3];
    }
    double tail = 0.0;
    for (; r < n; ++r) tail += v[r];
    return ((a0 + a1) + (a2 + a3)) + tail;
}

inline double dot(const double* a, const double* b, std::size_t n) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t r = 0;
    for (; r + 4 <= n; r += 4) {
        a0 += a[r] * b[r];
        a1 += a[r + 1] * b[r + 1];
        a2 += a[r + 2] * b[r + 2];
        a3 += a[r + 3] * b[r + 3];
    }
    double tail = 0.0;
    for (; r < n; ++r) tail += a[r] * b[r];
    return ((a0 + a1) + (a2 + a3)) + tail;
}

struct MinMax {
    double lo;
    double hi;
};

inline MinMax min_max(const double* v, std::size_t n) {
    double lo0 = v[0], lo1 = v[0], lo2 = v[0], lo3 = v[0];
    double hi0 = v[0], hi1 = v[0], hi2 = v[0], hi3 = v[0];
    std::size_t r = 0;
    for (; r + 4 <= n; r += 4) {
        lo0 = v[r] < lo0 ? v[r] : lo0;
        hi0 = v[r] > hi0 ? v[r] : hi0;
        lo1 = v[r + 1] < lo1 ? v[r + 1] : lo1;
        hi1 = v[r + 1] > hi1 ? v[r + 1] : hi1;
        lo2 = v[r + 2] < lo2 ? v[r + 2] : lo2;
        hi2 = v[r + 2] > hi2 ? v[r + 2] : hi2;
        lo3 = v[r + 3] < lo3 ? v[r + 3] : lo3;
        hi3 = v[r + 3] > hi3 ? v[r + 3] : hi3;
    }
    for (; r < n; ++r) {
        lo0 = v[r] < lo0 ? v[r] : lo0;
        hi0 = v[r] > hi0 ? v[r] : hi0;
    }
    const double lo = std::min(std::min(lo0, lo1), std::min(lo2, lo3));
    const double hi = std::max(std::max(hi0, hi1), std::max(hi2, hi3));
    return {lo, hi};
}

inline double sum_sq_dev(const double* v, std::size_t n, double mean) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t r = 0;
    for (; r + 4 <= n; r += 4) {
        const double d0 = v[r] - mean;
        const double d1 = v[r + 1] - mean;
        const double d2 = v[r + 2] - mean;
        const double d3 = v[r + 3] - mean;
        a0 += d0 * d0;
        a1 += d1 * d1;
        a2 += d2 * d2;
        a3 += d3 * d3;
    }
    double tail = 0.0;
    for (; r < n; ++r) {
        const double d = v[r] - mean;
        tail += d * d;
    }
    return ((a0 + a1) + (a2 + a3)) + tail;
}

} // namespace cvsnpm::detail
