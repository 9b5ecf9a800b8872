#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvsnpm/dataset.hpp"
#include "cvsnpm/matrix.hpp"
#include "cvsnpm/regression.hpp"

namespace cvsnpm {

struct LearnConfig {
    std::uint64_t seed = 0;      // triple visit order
    double eps_tie = 1e-9;       // equal-opposing-percentage tolerance
    double min_strength = 0.0;   // minimum |coefficient| for edge emission
    double min_pcnt = 0.0;       // minimum mapped contribution for edge emission
    bool parallel = false;

    void validate() const; // throws InvalidArgument
};

struct SkippedTriple {
    TripleIndex triple;
    std::string reason;
};

// Score of one ordered pair within a triple: the path coefficient of
// from -> to, its mapped contribution, and the intercept of the fit
// that targets `to`.
struct DirectedScore {
    std::size_t from = 0;
    std::size_t to = 0;
    double coeff = 0.0;
    double mapped = 0.0;
    double intercept = 0.0;
};

using TripleScores = std::array<DirectedScore, 6>;

// Running output matrices: strn(p, q) is the path-coefficient strength
// of p -> q, drct counts threshold wins, pcnt holds the best mapped
// contribution seen, err[q] the intercept of the winning fit at q.
struct LearnState {
    Matrix<double> strn;
    Matrix<std::uint32_t> drct;
    Matrix<double> pcnt;
    std::vector<double> err;
    std::vector<SkippedTriple> skipped;

    LearnState() = default;
    explicit LearnState(std::size_t n)
        : strn(n, n), drct(n, n), pcnt(n, n), err(n, 0.0) {}

    std::size_t size() const { return err.size(); }
};

// Every one of C(n,3) triples exactly once, in seeded-shuffled order.
std::vector<TripleIndex> enumerate_triples(std::size_t n, std::uint64_t seed);

// fit_triple + percent_contributions + npm_map for all six ordered
// pairs. Throws DegenerateTriple / DegenerateDenominator; callers record
// the triple as skipped.
TripleScores score_triple(const Dataset& data, TripleIndex t);
TripleScores score_triple(const Moments& moments, const std::vector<double>& denom_eps,
                          TripleIndex t);

// Keep the per-pair maximum mapped contribution: a strict improvement
// updates pcnt, strn, err[to] and increments drct.
void update_threshold(LearnState& state, const TripleScores& scores);

// Pairwise finalization: zero the weaker direction of every pair, and
// both directions when they tie within eps_tie (ties would otherwise
// leave a 2-cycle). err is per-node and is not zeroed.
void anti_cycle_sweep(LearnState& state, double eps_tie);

// Threshold pass over all triples, no sweep and no pruning. Exposed so
// the pre-sweep matrices can be checked against an independent oracle.
LearnState scan_triples(const Dataset& data, const LearnConfig& config);

// scan_triples + anti_cycle_sweep + min_strength/min_pcnt pruning.
// Deterministic per (data, config); throws EmptyResult when every
// triple was skipped.
LearnState learn(const Dataset& data, const LearnConfig& config);

} // namespace cvsnpm
