#include "cvsnpm/learner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "cvsnpm/npm.hpp"

namespace cvsnpm {

void LearnConfig::validate() const {
    if (eps_tie < 0.0) throw InvalidArgument("eps_tie must be nonnegative");
    if (min_strength < 0.0) throw InvalidArgument("min_strength must be nonnegative");
    if (min_pcnt < 0.0) throw InvalidArgument("min_pcnt must be nonnegative");
}

std::vector<TripleIndex> enumerate_triples(std::size_t n, std::uint64_t seed) {
    if (n < 3) throw InvalidArgument("need at least 3 variables to form a triple");
    std::vector<TripleIndex> triples;
    triples.reserve(n * (n - 1) * (n - 2) / 6);
    for (std::size_t i = 0; i + 2 < n; ++i) {
        for (std::size_t j = i + 1; j + 1 < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) triples.push_back(TripleIndex(i, j, k));
        }
    }
    std::mt19937_64 rng(seed);
    std::shuffle(triples.begin(), triples.end(), rng);
    return triples;
}

namespace {

TripleScores score_from_fit(const TripleFit& fit, const std::vector<double>& denom_eps) {
    TripleScores scores;
    std::size_t slot = 0;
    for (const auto& single : fit.fits) {
        const auto cv = contributions(single, denom_eps[single.target]);
        for (std::size_t p = 0; p < 2; ++p) {
            scores[slot++] = DirectedScore{
                .from = single.parents[p],
                .to = single.target,
                .coeff = single.coeffs[p],
                .mapped = cv.mapped[p],
                .intercept = single.intercept,
            };
        }
    }
    return scores;
}

std::vector<double> denom_eps_per_column(const Moments& moments) {
    std::vector<double> eps(moments.sums.size());
    for (std::size_t c = 0; c < eps.size(); ++c) {
        eps[c] = denominator_epsilon(moments, c);
    }
    return eps;
}

struct ScoredTriple {
    bool ok = false;
    TripleScores scores{};
    std::string skip_reason;
};

ScoredTriple score_or_skip(const Moments& moments, const std::vector<double>& denom_eps,
                           TripleIndex t) {
    ScoredTriple result;
    try {
        result.scores = score_triple(moments, denom_eps, t);
        result.ok = true;
    } catch (const DegenerateTriple& e) {
        result.skip_reason = e.what();
    } catch (const DegenerateDenominator& e) {
        result.skip_reason = e.what();
    }
    return result;
}

} // namespace

TripleScores score_triple(const Moments& moments, const std::vector<double>& denom_eps,
                          TripleIndex t) {
    return score_from_fit(fit_triple(moments, t), denom_eps);
}

TripleScores score_triple(const Dataset& data, TripleIndex t) {
    std::vector<double> eps(data.cols(), 0.0);
    for (std::size_t c : {t.i, t.j, t.k}) eps[c] = denominator_epsilon(data.columns[c]);
    return score_from_fit(fit_triple(data, t), eps);
}

void update_threshold(LearnState& state, const TripleScores& scores) {
    for (const auto& score : scores) {
        if (score.mapped > state.pcnt(score.from, score.to)) {
            state.pcnt(score.from, score.to) = score.mapped;
            state.strn(score.from, score.to) = score.coeff;
            state.err[score.to] = score.intercept;
            state.drct(score.from, score.to) += 1;
        }
    }
}

void anti_cycle_sweep(LearnState& state, double eps_tie) {
    const std::size_t n = state.size();
    auto clear = [&state](std::size_t from, std::size_t to) {
        state.strn(from, to) = 0.0;
        state.drct(from, to) = 0;
        state.pcnt(from, to) = 0.0;
    };
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r + 1; c < n; ++c) {
            const double fwd = state.pcnt(r, c);
            const double rev = state.pcnt(c, r);
            if (fwd > rev + eps_tie) {
                clear(c, r);
            } else if (rev > fwd + eps_tie) {
                clear(r, c);
            } else if (fwd != 0.0 && rev != 0.0) {
                // Equal opposing percentages would form a 2-cycle; discard both.
                clear(r, c);
                clear(c, r);
            }
        }
    }
}

namespace {

std::vector<ScoredTriple> score_all(const Moments& moments, const std::vector<double>& denom_eps,
                                    const std::vector<TripleIndex>& triples, bool parallel) {
    std::vector<ScoredTriple> results(triples.size());
    if (!parallel || triples.size() < 2) {
        for (std::size_t idx = 0; idx < triples.size(); ++idx) {
            results[idx] = score_or_skip(moments, denom_eps, triples[idx]);
        }
        return results;
    }

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, triples.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t idx = next.fetch_add(1); idx < triples.size();
                 idx = next.fetch_add(1)) {
                results[idx] = score_or_skip(moments, denom_eps, triples[idx]);
            }
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

// Shared threshold pass: scoring may run in parallel, but wins are
// replayed in visit order so the result matches the sequential run
// exactly, drct included.
LearnState threshold_pass(const Dataset& data, const LearnConfig& config) {
    data.validate();
    config.validate();

    const auto triples = enumerate_triples(data.cols(), config.seed);
    const auto moments = Moments::of(data);
    const auto denom_eps = denom_eps_per_column(moments);
    const auto scored = score_all(moments, denom_eps, triples, config.parallel);

    LearnState state(data.cols());
    for (std::size_t idx = 0; idx < triples.size(); ++idx) {
        if (scored[idx].ok) {
            update_threshold(state, scored[idx].scores);
        } else {
            state.skipped.push_back({triples[idx], scored[idx].skip_reason});
        }
    }
    if (state.skipped.size() == triples.size()) {
        throw EmptyResult("all " + std::to_string(triples.size()) + " triples were skipped");
    }
    return state;
}

void prune(LearnState& state, const LearnConfig& config) {
    const std::size_t n = state.size();
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (state.strn(p, q) == 0.0 && state.pcnt(p, q) == 0.0) continue;
            if (std::abs(state.strn(p, q)) < config.min_strength ||
                state.pcnt(p, q) < config.min_pcnt) {
                state.strn(p, q) = 0.0;
                state.drct(p, q) = 0;
                state.pcnt(p, q) = 0.0;
            }
        }
    }
}

} // namespace

LearnState scan_triples(const Dataset& data, const LearnConfig& config) {
    return threshold_pass(data, config);
}

LearnState learn(const Dataset& data, const LearnConfig& config) {
    LearnState state = threshold_pass(data, config);
    anti_cycle_sweep(state, config.eps_tie);
    prune(state, config);
    return state;
}

} // namespace cvsnpm
