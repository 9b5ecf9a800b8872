#include "cvsnpm/regression.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvsnpm/detail/kernels.hpp"

namespace cvsnpm {

TripleIndex::TripleIndex(std::size_t a, std::size_t b, std::size_t c) : i(a), j(b), k(c) {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    if (i == j || j == k) {
        throw InvalidArgument("triple indices must be distinct, got (" + std::to_string(a) +
                              ", " + std::to_string(b) + ", " + std::to_string(c) + ")");
    }
}

Moments Moments::of(const Dataset& data) {
    const std::size_t n = data.cols();
    const std::size_t m = data.rows();
    Moments mom;
    mom.rows = m;
    mom.sums.assign(n, 0.0);
    mom.cross = Matrix<double>(n, n);
    for (std::size_t p = 0; p < n; ++p) {
        const double* col = data.columns[p].data();
        mom.sums[p] = detail::sum(col, m);
        for (std::size_t q = p; q < n; ++q) {
            const double cs = detail::dot(col, data.columns[q].data(), m);
            mom.cross(p, q) = cs;
            mom.cross(q, p) = cs;
        }
    }
    return mom;
}

std::array<double, 3> solve_normal_equations(const std::array<std::array<double, 3>, 3>& gram,
                                             const std::array<double, 3>& rhs) {
    double a[3][4];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) a[r][c] = gram[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        a[r][3] = rhs[static_cast<std::size_t>(r)];
    }

    double max_row_norm = 0.0;
    for (int r = 0; r < 3; ++r) {
        double norm = std::abs(a[r][0]) + std::abs(a[r][1]) + std::abs(a[r][2]);
        max_row_norm = std::max(max_row_norm, norm);
    }
    const double pivot_floor = 1e-12 * max_row_norm;

    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) <= pivot_floor) {
            throw SingularSystem("normal equations singular at pivot column " +
                                 std::to_string(col),
                                 col);
        }
        if (pivot != col) std::swap(a[pivot], a[col]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }

    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double acc = a[r][3];
        for (int c = r + 1; c < 3; ++c) acc -= a[r][c] * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = acc / a[r][r];
    }
    return x;
}

bool residual_sum_ok(const SingleFit& fit) {
    const double predicted = fit.coeffs[0] * fit.sum_parent1 + fit.coeffs[1] * fit.sum_parent2 +
                             static_cast<double>(fit.rows) * fit.intercept;
    const double tol = 1e-9 * (std::abs(fit.sum_target) + static_cast<double>(fit.rows));
    return std::abs(fit.sum_target - predicted) <= tol;
}

const SingleFit& TripleFit::targeting(std::size_t column) const {
    for (const auto& fit : fits) {
        if (fit.target == column) return fit;
    }
    throw InvalidArgument("no fit targets column " + std::to_string(column));
}

namespace {

SingleFit fit_single(const Moments& mom, std::size_t target, std::size_t p1, std::size_t p2,
                     TripleIndex t) {
    const double m = static_cast<double>(mom.rows);
    const std::array<std::array<double, 3>, 3> gram{{
        {mom.cross(p1, p1), mom.cross(p1, p2), mom.sums[p1]},
        {mom.cross(p2, p1), mom.cross(p2, p2), mom.sums[p2]},
        {mom.sums[p1], mom.sums[p2], m},
    }};
    const std::array<double, 3> rhs{mom.cross(target, p1), mom.cross(target, p2),
                                    mom.sums[target]};

    std::array<double, 3> solution{};
    try {
        solution = solve_normal_equations(gram, rhs);
    } catch (const SingularSystem& e) {
        throw DegenerateTriple("columns " + std::to_string(p1) + " and " + std::to_string(p2) +
                                   " (with intercept) are collinear when fitting column " +
                                   std::to_string(target) + ": " + e.what(),
                               t);
    }

    SingleFit fit;
    fit.target = target;
    fit.parents = {p1, p2};
    fit.coeffs = {solution[0], solution[1]};
    fit.intercept = solution[2];
    fit.sum_target = mom.sums[target];
    fit.sum_parent1 = mom.sums[p1];
    fit.sum_parent2 = mom.sums[p2];
    fit.rows = mom.rows;
    return fit;
}

// Moments restricted to one triple; indexing still uses dataset columns
// and the same kernels as Moments::of, so both fit paths agree bitwise.
Moments triple_moments(const Dataset& data, TripleIndex t) {
    const std::size_t m = data.rows();
    const std::size_t idx[3] = {t.i, t.j, t.k};
    Moments mom;
    mom.rows = m;
    mom.sums.assign(data.cols(), 0.0);
    mom.cross = Matrix<double>(data.cols(), data.cols());
    for (std::size_t a = 0; a < 3; ++a) {
        const double* col = data.columns[idx[a]].data();
        mom.sums[idx[a]] = detail::sum(col, m);
        for (std::size_t b = a; b < 3; ++b) {
            const double cs = detail::dot(col, data.columns[idx[b]].data(), m);
            mom.cross(idx[a], idx[b]) = cs;
            mom.cross(idx[b], idx[a]) = cs;
        }
    }
    return mom;
}

} // namespace

TripleFit fit_triple(const Moments& moments, TripleIndex t) {
    const std::size_t n = moments.sums.size();
    if (t.k >= n) {
        throw InvalidArgument("triple index " + std::to_string(t.k) + " out of range for " +
                              std::to_string(n) + " columns");
    }
    TripleFit result;
    result.index = t;
    result.fits[0] = fit_single(moments, t.i, t.j, t.k, t);
    result.fits[1] = fit_single(moments, t.j, t.i, t.k, t);
    result.fits[2] = fit_single(moments, t.k, t.i, t.j, t);
    return result;
}

TripleFit fit_triple(const Dataset& data, TripleIndex t) {
    if (t.k >= data.cols()) {
        throw InvalidArgument("triple index " + std::to_string(t.k) + " out of range for " +
                              std::to_string(data.cols()) + " columns");
    }
    return fit_triple(triple_moments(data, t), t);
}

} // namespace cvsnpm
