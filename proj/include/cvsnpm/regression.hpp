#pragma once

#include <array>
#include <cstddef>

#include "cvsnpm/dataset.hpp"
#include "cvsnpm/errors.hpp"
#include "cvsnpm/matrix.hpp"

namespace cvsnpm {

// Three distinct column indices, stored canonically as i < j < k.
struct TripleIndex {
    std::size_t i = 0, j = 1, k = 2;

    TripleIndex() = default;
    // Sorts the indices; throws InvalidArgument if they are not distinct.
    TripleIndex(std::size_t a, std::size_t b, std::size_t c);

    bool contains(std::size_t v) const { return v == i || v == j || v == k; }
    bool operator==(const TripleIndex&) const = default;
};

// First and second raw moments of every column pair, computed once per
// dataset so each triple fit assembles its normal equations in O(1).
struct Moments {
    std::size_t rows = 0;
    std::vector<double> sums;  // sum of v_p
    Matrix<double> cross;      // sum of v_p * v_q

    static Moments of(const Dataset& data);
};

// The normal-equation system is singular: a pivot collapsed during
// elimination, meaning the design columns are (near-)collinear.
class SingularSystem : public Error {
public:
    SingularSystem(const std::string& what, int pivot_column)
        : Error(what), pivot_column(pivot_column) {}
    int pivot_column;
};

// A triple whose fit cannot be computed; carries the offending triple.
class DegenerateTriple : public Error {
public:
    DegenerateTriple(const std::string& what, TripleIndex triple)
        : Error(what), triple(triple) {}
    TripleIndex triple;
};

// Direct 3x3 elimination with partial pivoting. Throws SingularSystem
// when a pivot falls below 1e-12 times the max row norm of the gram.
std::array<double, 3> solve_normal_equations(const std::array<std::array<double, 3>, 3>& gram,
                                             const std::array<double, 3>& rhs);

// One fitted linear model: target = coeffs[0]*parent1 + coeffs[1]*parent2
// + intercept per row. With the intercept included the residuals sum to
// zero, so sum_target = coeffs[0]*sum_parent1 + coeffs[1]*sum_parent2 +
// rows*intercept up to rounding; the aggregate confounder is
// rows*intercept.
struct SingleFit {
    std::size_t target = 0;
    std::array<std::size_t, 2> parents{};
    std::array<double, 2> coeffs{};
    double intercept = 0.0;
    double sum_target = 0.0;
    double sum_parent1 = 0.0;
    double sum_parent2 = 0.0;
    std::size_t rows = 0;
};

// Residual-sum-zero check: |sum_target - (coeffs . parent_sums +
// rows*intercept)| <= 1e-9 * (|sum_target| + rows).
bool residual_sum_ok(const SingleFit& fit);

// The three permuted fits of one triple; fits[0], fits[1], fits[2]
// target i, j, k respectively, covering all six path coefficients and
// three intercepts.
struct TripleFit {
    TripleIndex index;
    std::array<SingleFit, 3> fits;

    const SingleFit& targeting(std::size_t column) const;
};

TripleFit fit_triple(const Dataset& data, TripleIndex t);
TripleFit fit_triple(const Moments& moments, TripleIndex t);

} // namespace cvsnpm
