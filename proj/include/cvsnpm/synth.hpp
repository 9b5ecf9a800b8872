#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "cvsnpm/dataset.hpp"
#include "cvsnpm/matrix.hpp"

namespace cvsnpm {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Recipe for a synthetic benchmark dataset: 40% of the variables are
// i.i.d. draws from the 49 distribution kinds, the rest are two-parent
// linear mixtures with a constant confounder and a fresh noise column.
struct SynthSpec {
    std::size_t instances = 500; // m
    std::size_t variables = 10;  // n
    std::uint64_t seed = 0;
    double source_fraction = 0.40;
    Interval coeff_neg{-5.0, -0.5};
    Interval coeff_pos{0.5, 3.0};
    Interval confounder{-2.0, 3.0};

    std::size_t source_count() const;
    void validate() const; // throws InvalidArgument
};

// Generating model behind a synthetic dataset. adjacency(p, q) is the
// mixing coefficient of variable p in the linear model of variable q
// (zero entries mean no edge). dist_kinds[c] is the sampling kind of a
// source column, or the noise kind of a mixture column.
struct GroundTruth {
    Matrix<double> adjacency;
    std::vector<double> confounders;
    std::vector<int> dist_kinds;
    std::size_t source_count = 0;

    std::size_t edge_count() const;
};

inline constexpr int kNumDistributionKinds = 49;

// Kinds 1-7 are the base distributions: Uniform(-1,1), Exponential(1),
// Normal(0,1), Log-normal(0,1), Laplace(0,1), Student-t df 3,
// Student-t df 5. Kinds 8-28 are the 21 equal-weight two-component
// mixtures of distinct base pairs in lexicographic pair order; 29-49
// are the same pairs with one asymmetric weight drawn per call from
// [0.1,0.45] u [0.55,0.9].
std::vector<double> sample_distribution(int kind, std::size_t count, std::mt19937_64& rng);

// Pure function of the spec: equal specs give bit-identical output.
std::pair<Dataset, GroundTruth> synth_dataset(const SynthSpec& spec);

} // namespace cvsnpm
