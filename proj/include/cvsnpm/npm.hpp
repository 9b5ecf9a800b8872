#pragma once

#include <array>

#include "cvsnpm/errors.hpp"
#include "cvsnpm/regression.hpp"

namespace cvsnpm {

// Signed percentage contributions of the two parent terms and the
// confounder toward the target aggregate (1.0 = 100%), plus their image
// under negative percentage mapping. raw sums to 1 whenever the fit is a
// least-squares optimum; mapped lies on the probability simplex.
struct ContributionVector {
    std::array<double, 3> raw{};
    std::array<double, 3> mapped{};
    double denom_sum = 0.0;
};

// The target column sums to (nearly) zero, so "percent of total" is
// meaningless for this fit. Mean-centered data triggers this; such
// triples are skipped rather than shifted.
class DegenerateDenominator : public Error {
public:
    DegenerateDenominator(const std::string& what, std::size_t target)
        : Error(what), target(target) {}
    std::size_t target;
};

class UndefinedContribution : public Error {
public:
    using Error::Error;
};

// Skip threshold for a target column: 1e-8 * m * stddev(column).
double denominator_epsilon(const std::vector<double>& column);

// Same threshold from precomputed aggregates, so the learner pays O(1)
// per column instead of another pass over the data.
double denominator_epsilon(const Moments& moments, std::size_t column);

// raw = (coeffs[0]*sum_parent1, coeffs[1]*sum_parent2, rows*intercept)
// / sum_target. Throws DegenerateDenominator when |sum_target| <=
// eps_denom.
std::array<double, 3> percent_contributions(const SingleFit& fit, double eps_denom);

// mapped_t = |raw_t| / sum_u |raw_u|. Identity on the nonnegative
// simplex; throws UndefinedContribution on the all-zero vector.
std::array<double, 3> npm_map(const std::array<double, 3>& raw);

ContributionVector contributions(const SingleFit& fit, double eps_denom);

} // namespace cvsnpm
