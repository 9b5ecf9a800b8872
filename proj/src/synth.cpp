#include "cvsnpm/synth.hpp"

#include <cmath>
#include <string>

namespace cvsnpm {

namespace {

double draw_base(int kind, std::mt19937_64& rng) {
    switch (kind) {
        case 1: return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        case 2: return std::exponential_distribution<double>(1.0)(rng);
        case 3: return std::normal_distribution<double>(0.0, 1.0)(rng);
        case 4: return std::lognormal_distribution<double>(0.0, 1.0)(rng);
        case 5: {
            // Laplace(0,1) by inversion
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
        }
        case 6: return std::student_t_distribution<double>(3.0)(rng);
        case 7: return std::student_t_distribution<double>(5.0)(rng);
        default: throw InvalidArgument("base distribution kind out of range");
    }
}

// Pairs of distinct base kinds in lexicographic order:
// (1,2),(1,3),...,(1,7),(2,3),...,(6,7).
std::pair<int, int> mixture_pair(int pair_index) {
    int idx = 0;
    for (int a = 1; a <= 7; ++a) {
        for (int b = a + 1; b <= 7; ++b) {
            if (idx == pair_index) return {a, b};
            ++idx;
        }
    }
    throw InvalidArgument("mixture pair index out of range");
}

// One weight from [0.1, 0.45] u [0.55, 0.9].
double draw_asymmetric_weight(std::mt19937_64& rng) {
    const double x = std::uniform_real_distribution<double>(0.0, 0.7)(rng);
    return x < 0.35 ? 0.1 + x : 0.55 + (x - 0.35);
}

double draw_interval(const Interval& iv, std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng);
}

// Mixing coefficient from [-5,-0.5] u [0.5,3], area-weighted.
double draw_coefficient(const SynthSpec& spec, std::mt19937_64& rng) {
    const double neg_len = spec.coeff_neg.hi - spec.coeff_neg.lo;
    const double pos_len = spec.coeff_pos.hi - spec.coeff_pos.lo;
    const double x = std::uniform_real_distribution<double>(0.0, neg_len + pos_len)(rng);
    return x < neg_len ? spec.coeff_neg.lo + x : spec.coeff_pos.lo + (x - neg_len);
}

} // namespace

std::size_t SynthSpec::source_count() const {
    return static_cast<std::size_t>(std::lround(source_fraction * static_cast<double>(variables)));
}

void SynthSpec::validate() const {
    if (instances < 4) {
        throw InvalidArgument("need at least 4 instances, got " + std::to_string(instances));
    }
    if (variables < 3) {
        throw InvalidArgument("need at least 3 variables, got " + std::to_string(variables));
    }
    if (source_count() < 2) {
        throw InvalidArgument("source split round(" + std::to_string(source_fraction) + " * " +
                              std::to_string(variables) +
                              ") must be at least 2 so mixtures have two parents");
    }
    if (source_count() >= variables) {
        throw InvalidArgument("source split leaves no mixture variables");
    }
    if (coeff_neg.lo > coeff_neg.hi || coeff_pos.lo > coeff_pos.hi ||
        confounder.lo > confounder.hi) {
        throw InvalidArgument("empty interval in synthesis spec");
    }
}

std::size_t GroundTruth::edge_count() const {
    std::size_t count = 0;
    for (std::size_t p = 0; p < adjacency.rows(); ++p) {
        for (std::size_t q = 0; q < adjacency.cols(); ++q) {
            if (adjacency(p, q) != 0.0) ++count;
        }
    }
    return count;
}

std::vector<double> sample_distribution(int kind, std::size_t count, std::mt19937_64& rng) {
    if (kind < 1 || kind > kNumDistributionKinds) {
        throw InvalidArgument("distribution kind " + std::to_string(kind) + " not in 1..49");
    }
    std::vector<double> out(count);
    if (kind <= 7) {
        for (auto& v : out) v = draw_base(kind, rng);
        return out;
    }
    const bool symmetric = kind <= 28;
    const auto [first, second] = mixture_pair(symmetric ? kind - 8 : kind - 29);
    const double weight = symmetric ? 0.5 : draw_asymmetric_weight(rng);
    std::bernoulli_distribution pick_first(weight);
    for (auto& v : out) v = draw_base(pick_first(rng) ? first : second, rng);
    return out;
}

std::pair<Dataset, GroundTruth> synth_dataset(const SynthSpec& spec) {
    spec.validate();
    const std::size_t m = spec.instances;
    const std::size_t n = spec.variables;
    const std::size_t sources = spec.source_count();

    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> any_kind(1, kNumDistributionKinds);

    Dataset data;
    GroundTruth truth;
    truth.adjacency = Matrix<double>(n, n);
    truth.confounders.assign(n, 0.0);
    truth.dist_kinds.assign(n, 0);
    truth.source_count = sources;

    for (std::size_t c = 0; c < n; ++c) data.names.push_back("v" + std::to_string(c));
    data.columns.resize(n);

    for (std::size_t c = 0; c < sources; ++c) {
        const int kind = any_kind(rng);
        truth.dist_kinds[c] = kind;
        data.columns[c] = sample_distribution(kind, m, rng);
    }

    for (std::size_t c = sources; c < n; ++c) {
        std::uniform_int_distribution<std::size_t> pick(0, c - 1);
        const std::size_t p1 = pick(rng);
        std::size_t p2 = pick(rng);
        while (p2 == p1) p2 = pick(rng);

        const double c1 = draw_coefficient(spec, rng);
        const double c2 = draw_coefficient(spec, rng);
        const double conf = draw_interval(spec.confounder, rng);
        const int noise_kind = any_kind(rng);
        const auto noise = sample_distribution(noise_kind, m, rng);

        auto& col = data.columns[c];
        col.resize(m);
        for (std::size_t r = 0; r < m; ++r) {
            col[r] = c1 * data.columns[p1][r] + c2 * data.columns[p2][r] + conf + noise[r];
        }

        truth.adjacency(p1, c) = c1;
        truth.adjacency(p2, c) = c2;
        truth.confounders[c] = conf;
        truth.dist_kinds[c] = noise_kind;
    }

    data.validate();
    return {std::move(data), std::move(truth)};
}

} // namespace cvsnpm
