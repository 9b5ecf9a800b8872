#pragma once

#include <string>
#include <vector>

#include "cvsnpm/learner.hpp"
#include "cvsnpm/synth.hpp"

namespace cvsnpm {

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    double strength = 0.0;
    double pcnt = 0.0;
};

struct RemovedEdge {
    Edge edge;
    std::string reason;
};

// Final causal graph: at most one direction per node pair, no
// self-loops, and the edge set admits a topological order once
// break_cycles has run.
struct CausalDag {
    std::vector<std::string> nodes;
    std::vector<Edge> edges;
    std::vector<double> confounders;
    std::vector<RemovedEdge> removed_edges;
};

struct TopoResult {
    bool acyclic = false;
    std::vector<std::size_t> order; // topological order when acyclic
    std::vector<std::size_t> cycle; // witness cycle (first node repeated) when not
};

// One edge per nonzero strn entry, confounders copied from err, then
// break_cycles. names may be empty (node indices are used).
CausalDag to_dag(const LearnState& output, std::vector<std::string> names = {});

// While a directed cycle exists, remove the cycle edge with the
// smallest pcnt (ties: smallest |strength|, then lexicographic
// (from, to)), logging it in removed_edges.
void break_cycles(CausalDag& dag);

TopoResult is_acyclic(const CausalDag& dag);

struct RecoveryScore {
    double directed_precision = 0.0;
    double directed_recall = 0.0;
    std::size_t shd = 0; // missing + extra + reversed
    double coefficient_rmse = 0.0; // over edges present in both
    std::size_t truth_edges = 0;
    std::size_t learned_edges = 0;
    std::size_t correct_edges = 0;
};

// Directed precision/recall of dag.edges against the nonzero entries of
// truth.adjacency. Throws InvalidArgument on a size mismatch.
RecoveryScore score_against_truth(const CausalDag& dag, const GroundTruth& truth);

// Deterministic DOT digraph: nodes by index, edges sorted by (from, to),
// strengths rounded to 3 decimals, confounders above 1e-6 in magnitude
// annotated on their node.
std::string export_dot(const CausalDag& dag);

} // namespace cvsnpm
