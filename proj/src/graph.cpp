#include "cvsnpm/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace cvsnpm {

namespace {

std::vector<std::vector<std::size_t>> adjacency_lists(std::size_t n,
                                                      const std::vector<Edge>& edges) {
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : edges) adj[e.from].push_back(e.to);
    for (auto& targets : adj) std::sort(targets.begin(), targets.end());
    return adj;
}

// DFS cycle search; returns the cycle as nodes with the entry node
// repeated at the end, or empty when acyclic.
std::vector<std::size_t> find_cycle(std::size_t n, const std::vector<Edge>& edges) {
    const auto adj = adjacency_lists(n, edges);
    enum class Color { White, Gray, Black };
    std::vector<Color> color(n, Color::White);

    for (std::size_t start = 0; start < n; ++start) {
        if (color[start] != Color::White) continue;
        // Iterative DFS keeping the gray path so a back edge yields the cycle.
        std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
        color[start] = Color::Gray;
        while (!stack.empty()) {
            const std::size_t node = stack.back().first;
            if (stack.back().second < adj[node].size()) {
                const std::size_t child = adj[node][stack.back().second++];
                if (color[child] == Color::Gray) {
                    std::vector<std::size_t> cycle;
                    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                        cycle.push_back(it->first);
                        if (it->first == child) break;
                    }
                    std::reverse(cycle.begin(), cycle.end()); // child, ..., node
                    cycle.push_back(child);
                    return cycle;
                }
                if (color[child] == Color::White) {
                    color[child] = Color::Gray;
                    stack.emplace_back(child, 0);
                }
            } else {
                color[node] = Color::Black;
                stack.pop_back();
            }
        }
    }
    return {};
}

} // namespace

TopoResult is_acyclic(const CausalDag& dag) {
    const std::size_t n = dag.nodes.size();
    TopoResult result;

    std::vector<std::size_t> in_degree(n, 0);
    for (const auto& e : dag.edges) ++in_degree[e.to];
    const auto adj = adjacency_lists(n, dag.edges);

    // Kahn's algorithm with an ordered frontier for deterministic output.
    std::set<std::size_t> frontier;
    for (std::size_t v = 0; v < n; ++v) {
        if (in_degree[v] == 0) frontier.insert(v);
    }
    while (!frontier.empty()) {
        const std::size_t v = *frontier.begin();
        frontier.erase(frontier.begin());
        result.order.push_back(v);
        for (std::size_t child : adj[v]) {
            if (--in_degree[child] == 0) frontier.insert(child);
        }
    }

    if (result.order.size() == n) {
        result.acyclic = true;
        return result;
    }
    result.order.clear();
    result.cycle = find_cycle(n, dag.edges);
    return result;
}

void break_cycles(CausalDag& dag) {
    while (true) {
        auto cycle = find_cycle(dag.nodes.size(), dag.edges);
        if (cycle.empty()) return;

        // Edges along the witness cycle, by (from, to).
        std::vector<std::size_t> victims;
        for (std::size_t step = 0; step + 1 < cycle.size(); ++step) {
            for (std::size_t idx = 0; idx < dag.edges.size(); ++idx) {
                if (dag.edges[idx].from == cycle[step] && dag.edges[idx].to == cycle[step + 1]) {
                    victims.push_back(idx);
                    break;
                }
            }
        }
        const auto weakest = *std::min_element(
            victims.begin(), victims.end(), [&dag](std::size_t a, std::size_t b) {
                const Edge& ea = dag.edges[a];
                const Edge& eb = dag.edges[b];
                return std::tuple(ea.pcnt, std::abs(ea.strength), ea.from, ea.to) <
                       std::tuple(eb.pcnt, std::abs(eb.strength), eb.from, eb.to);
            });
        dag.removed_edges.push_back({dag.edges[weakest], "cycle"});
        dag.edges.erase(dag.edges.begin() + static_cast<std::ptrdiff_t>(weakest));
    }
}

CausalDag to_dag(const LearnState& output, std::vector<std::string> names) {
    const std::size_t n = output.size();
    CausalDag dag;
    if (names.empty()) {
        for (std::size_t v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
    }
    if (names.size() != n) {
        throw InvalidArgument("have " + std::to_string(names.size()) + " names for " +
                              std::to_string(n) + " nodes");
    }
    dag.nodes = std::move(names);
    dag.confounders = output.err;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (output.strn(p, q) != 0.0) {
                dag.edges.push_back({p, q, output.strn(p, q), output.pcnt(p, q)});
            }
        }
    }
    break_cycles(dag);
    return dag;
}

RecoveryScore score_against_truth(const CausalDag& dag, const GroundTruth& truth) {
    const std::size_t n = dag.nodes.size();
    if (truth.adjacency.rows() != n || truth.adjacency.cols() != n) {
        throw InvalidArgument("ground truth is for " + std::to_string(truth.adjacency.rows()) +
                              " variables, graph has " + std::to_string(n));
    }

    Matrix<double> learned(n, n);
    for (const auto& e : dag.edges) learned(e.from, e.to) = e.strength;

    RecoveryScore score;
    double sq_err = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            const bool in_truth = truth.adjacency(p, q) != 0.0;
            const bool in_learned = learned(p, q) != 0.0;
            if (in_truth) ++score.truth_edges;
            if (in_learned) ++score.learned_edges;
            if (in_truth && in_learned) {
                ++score.correct_edges;
                const double diff = learned(p, q) - truth.adjacency(p, q);
                sq_err += diff * diff;
            }
        }
    }

    // SHD counts each discordant node pair once: reversal is one repair.
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const bool t_fwd = truth.adjacency(p, q) != 0.0;
            const bool t_rev = truth.adjacency(q, p) != 0.0;
            const bool l_fwd = learned(p, q) != 0.0;
            const bool l_rev = learned(q, p) != 0.0;
            const bool truth_any = t_fwd || t_rev;
            const bool learned_any = l_fwd || l_rev;
            if (truth_any != learned_any) {
                ++score.shd; // missing or extra
            } else if (truth_any && t_fwd != l_fwd) {
                ++score.shd; // reversed
            }
        }
    }

    score.directed_precision =
        score.learned_edges == 0 ? 1.0
                                 : static_cast<double>(score.correct_edges) /
                                       static_cast<double>(score.learned_edges);
    score.directed_recall = score.truth_edges == 0
                                ? 1.0
                                : static_cast<double>(score.correct_edges) /
                                      static_cast<double>(score.truth_edges);
    score.coefficient_rmse =
        score.correct_edges == 0
            ? 0.0
            : std::sqrt(sq_err / static_cast<double>(score.correct_edges));
    return score;
}

namespace {

bool is_plain_dot_id(const std::string& name) {
    if (name.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(name[0]))) return false;
    return std::all_of(name.begin(), name.end(), [](unsigned char ch) {
        return std::isalnum(ch) || ch == '_';
    });
}

std::string dot_escape(const std::string& text) {
    std::string escaped;
    for (char ch : text) {
        if (ch == '"' || ch == '\\') escaped += '\\';
        escaped += ch;
    }
    return escaped;
}

std::string dot_id(const std::string& name) {
    if (is_plain_dot_id(name)) return name;
    return "\"" + dot_escape(name) + "\"";
}

std::string fixed3(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", value);
    return buf;
}

} // namespace

std::string export_dot(const CausalDag& dag) {
    std::ostringstream out;
    out << "digraph causal {\n";
    for (std::size_t v = 0; v < dag.nodes.size(); ++v) {
        out << "  " << dot_id(dag.nodes[v]);
        if (std::abs(dag.confounders[v]) > 1e-6) {
            out << " [label=\"" << dot_escape(dag.nodes[v])
                << "\\ne=" << fixed3(dag.confounders[v]) << "\"]";
        }
        out << ";\n";
    }

    auto edges = dag.edges;
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.from, a.to) < std::pair(b.from, b.to);
    });
    for (const auto& e : edges) {
        out << "  " << dot_id(dag.nodes[e.from]) << " -> " << dot_id(dag.nodes[e.to])
            << " [label=\"" << fixed3(e.strength) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace cvsnpm
