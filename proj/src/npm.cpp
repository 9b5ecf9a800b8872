#include "cvsnpm/npm.hpp"

#include <cmath>
#include <string>

namespace cvsnpm {

double denominator_epsilon(const std::vector<double>& column) {
    return 1e-8 * static_cast<double>(column.size()) * column_stddev(column);
}

double denominator_epsilon(const Moments& moments, std::size_t column) {
    const double m = static_cast<double>(moments.rows);
    const double mean = moments.sums[column] / m;
    const double var = std::max(0.0, moments.cross(column, column) / m - mean * mean);
    return 1e-8 * m * std::sqrt(var);
}

std::array<double, 3> percent_contributions(const SingleFit& fit, double eps_denom) {
    if (std::abs(fit.sum_target) <= eps_denom) {
        throw DegenerateDenominator(
            "aggregate of target column " + std::to_string(fit.target) +
                " is too close to zero for percentage contributions",
            fit.target);
    }
    return {
        fit.coeffs[0] * fit.sum_parent1 / fit.sum_target,
        fit.coeffs[1] * fit.sum_parent2 / fit.sum_target,
        static_cast<double>(fit.rows) * fit.intercept / fit.sum_target,
    };
}

std::array<double, 3> npm_map(const std::array<double, 3>& raw) {
    const double total = std::abs(raw[0]) + std::abs(raw[1]) + std::abs(raw[2]);
    if (total == 0.0) {
        throw UndefinedContribution("all contributions are zero, nothing to map");
    }
    return {std::abs(raw[0]) / total, std::abs(raw[1]) / total, std::abs(raw[2]) / total};
}

ContributionVector contributions(const SingleFit& fit, double eps_denom) {
    ContributionVector cv;
    cv.raw = percent_contributions(fit, eps_denom);
    cv.mapped = npm_map(cv.raw);
    cv.denom_sum = fit.sum_target;
    return cv;
}

} // namespace cvsnpm
