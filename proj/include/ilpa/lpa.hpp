#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "ilpa/graph.hpp"
#include "ilpa/similarity.hpp"

namespace ilpa {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

inline constexpr double kDefaultBeta = 0.35;
inline constexpr std::size_t kDefaultMaxIter = 100;

/// Per-node label. Label values are node ids.
struct Labeling {
  std::vector<NodeId> label;
  std::size_t generation = 0;

  friend bool operator==(const Labeling&, const Labeling&) = default;
};

struct RunReport {
  Labeling final;
  std::size_t iterations = 0;
  bool converged = false;
  Seed seed = 0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

enum class VoteMode {
  unweighted,
  // Experimental: neighbor j's vote for i counts tsi(j, i) instead of 1.
  tsi_weighted,
};

struct PropagationOptions {
  std::size_t max_iter = kDefaultMaxIter;
  VoteMode vote = VoteMode::unweighted;
  const TsiTable* weights = nullptr;  // required for tsi_weighted
};

inline Labeling init_unique(const Graph& g) {
  Labeling l;
  l.label.resize(g.node_count());
  std::iota(l.label.begin(), l.label.end(), NodeId{0});
  return l;
}

inline void check_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw ParameterError("beta must lie in (0, 1], got " + std::to_string(beta));
}

/// Identical label initialization.
///
/// Starting from unique labels, nodes are visited in ascending id and each
/// neighbor j (ascending) takes label(i) when tsi(i,j) >= tsi(j,i) and
/// tsi(i,j) >= beta. label(i) is read at its current value, so labels chain
/// through earlier assignments within the pass.
inline Labeling init_identical(const Graph& g, const TsiTable& table, double beta) {
  check_beta(beta);
  Labeling l = init_unique(g);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    auto adj = g.neighbors(i);
    for (std::size_t k = 0; k < adj.size(); ++k) {
      const NodeId j = adj[k];
      const Tsi forward = table.at_slot(i, k);
      if (forward >= table(j, i) && forward.at_least(beta)) l.label[j] = l.label[i];
    }
  }
  return l;
}

namespace detail {

/// Scratch space for neighborhood votes, indexed by label (labels are < n).
class VoteCounter {
public:
  explicit VoteCounter(std::size_t n) : weight_(n, 0.0) {}

  /// Fills `best` with the labels of maximal vote, in order of first
  /// appearance among the neighbors.
  template <typename WeightOf>
  void tally(std::span<const NodeId> neighbors, std::span<const NodeId> labels,
             WeightOf&& weight_of, std::vector<NodeId>& best) {
    touched_.clear();
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
      const NodeId lab = labels[neighbors[k]];
      if (weight_[lab] == 0.0) touched_.push_back(lab);
      weight_[lab] += weight_of(k);
    }
    double top = 0.0;
    for (NodeId lab : touched_) top = std::max(top, weight_[lab]);
    best.clear();
    for (NodeId lab : touched_) {
      if (weight_[lab] == top) best.push_back(lab);
      weight_[lab] = 0.0;
    }
  }

private:
  std::vector<double> weight_;
  std::vector<NodeId> touched_;
};

template <typename F>
void with_vote_weights(const Graph& g, const PropagationOptions& opt, NodeId i, F&& f) {
  if (opt.vote == VoteMode::tsi_weighted) {
    auto adj = g.neighbors(i);
    f([&, adj](std::size_t k) { return (*opt.weights)(adj[k], i).value(); });
  } else {
    f([](std::size_t) { return 1.0; });
  }
}

}  // namespace detail

/// True when every non-isolated node carries one of the maximal-vote labels
/// of its neighborhood.
inline bool is_majority_stable(const Graph& g, std::span<const NodeId> labels,
                               const PropagationOptions& opt = {}) {
  detail::VoteCounter votes(g.node_count());
  std::vector<NodeId> best;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    auto adj = g.neighbors(i);
    if (adj.empty()) continue;
    detail::with_vote_weights(g, opt, i, [&](auto weight_of) { votes.tally(adj, labels, weight_of, best); });
    if (std::find(best.begin(), best.end(), labels[i]) == best.end()) return false;
  }
  return true;
}

/// Asynchronous label propagation from `start`.
///
/// Each pass visits all nodes in a freshly shuffled order. A node adopts the
/// unique maximal-frequency label among its neighbors, or a uniformly random
/// one of several tied labels. Stops after a pass without changes in which
/// every node holds a majority label, or after max_iter passes.
inline RunReport propagate(const Graph& g, Labeling start, Seed seed,
                           const PropagationOptions& opt = {}) {
  if (opt.max_iter < 1) throw ParameterError("max_iter must be at least 1");
  if (opt.vote == VoteMode::tsi_weighted && opt.weights == nullptr)
    throw ParameterError("weighted vote requires a tsi table");
  if (start.label.size() != g.node_count())
    throw ParameterError("start labeling does not cover the graph");

  RunReport report;
  report.seed = seed;
  report.final = std::move(start);
  auto& labels = report.final.label;

  Rng rng(seed);
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  detail::VoteCounter votes(g.node_count());
  std::vector<NodeId> best;

  while (report.iterations < opt.max_iter) {
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t changes = 0;
    for (NodeId i : order) {
      auto adj = g.neighbors(i);
      if (adj.empty()) continue;
      detail::with_vote_weights(g, opt, i, [&](auto weight_of) { votes.tally(adj, labels, weight_of, best); });
      NodeId next = best.front();
      if (best.size() > 1)
        next = best[std::uniform_int_distribution<std::size_t>(0, best.size() - 1)(rng)];
      if (next != labels[i]) {
        labels[i] = next;
        ++changes;
      }
    }
    ++report.iterations;
    ++report.final.generation;
    if (changes == 0 && is_majority_stable(g, labels, opt)) {
      report.converged = true;
      break;
    }
  }
  return report;
}

inline RunReport propagate(const Graph& g, Labeling start, Seed seed, std::size_t max_iter) {
  PropagationOptions opt;
  opt.max_iter = max_iter;
  return propagate(g, std::move(start), seed, opt);
}

inline RunReport run_lpa(const Graph& g, Seed seed, std::size_t max_iter = kDefaultMaxIter) {
  return propagate(g, init_unique(g), seed, max_iter);
}

inline RunReport run_ili_lpa(const Graph& g, const TsiTable& table, double beta, Seed seed,
                             const PropagationOptions& opt = {}) {
  return propagate(g, init_identical(g, table, beta), seed, opt);
}

inline RunReport run_ili_lpa(const Graph& g, double beta, Seed seed,
                             std::size_t max_iter = kDefaultMaxIter) {
  check_beta(beta);
  const TsiTable table = compute_tsi_table(g);
  PropagationOptions opt;
  opt.max_iter = max_iter;
  return run_ili_lpa(g, table, beta, seed, opt);
}

}  // namespace ilpa
