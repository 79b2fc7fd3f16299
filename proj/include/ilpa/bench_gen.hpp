#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ilpa/graph.hpp"

namespace ilpa {

/// Planted partition benchmark parameters. `mixing` is the expected share of
/// each node's edges that leave its community.
struct PlantedPartitionSpec {
  NodeId n = 1000;
  NodeId communities = 20;
  double avg_degree = 10.0;
  double mixing = 0.3;
  std::uint64_t seed = 0;
};

struct Benchmark {
  Graph graph;
  GroundTruth truth;
};

namespace detail {

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Calls emit(v) for each v in [first, last) kept with probability p, using
// geometric skips so the cost is proportional to the number of hits.
template <typename Emit>
void bernoulli_range(std::mt19937_64& rng, NodeId first, NodeId last, double p, Emit&& emit) {
  if (p <= 0.0 || first >= last) return;
  if (p >= 1.0) {
    for (NodeId v = first; v < last; ++v) emit(v);
    return;
  }
  const double log_q = std::log1p(-p);
  double pos = static_cast<double>(first) - 1.0;
  while (true) {
    const double u = 1.0 - unit_uniform(rng);  // (0, 1]
    pos += 1.0 + std::floor(std::log(u) / log_q);
    if (pos >= static_cast<double>(last)) return;
    emit(static_cast<NodeId>(pos));
  }
}

}  // namespace detail

inline void validate(const PlantedPartitionSpec& spec) {
  if (spec.communities < 2) throw ParameterError("need at least 2 communities");
  if (spec.n < spec.communities) throw ParameterError("n must be at least the community count");
  if (spec.n / spec.communities < 3) throw ParameterError("communities must have at least 3 nodes");
  if (!(spec.avg_degree >= 1.0)) throw ParameterError("avg_degree must be at least 1");
  if (!(spec.mixing >= 0.0 && spec.mixing < 1.0)) throw ParameterError("mixing must lie in [0, 1)");

  const NodeId smallest = spec.n / spec.communities;
  const NodeId largest = smallest + (spec.n % spec.communities ? 1 : 0);
  if ((1.0 - spec.mixing) * spec.avg_degree > smallest - 1)
    throw ParameterError("infeasible spec: internal degree " +
                         std::to_string((1.0 - spec.mixing) * spec.avg_degree) +
                         " exceeds community size " + std::to_string(smallest) + " - 1");
  if (spec.mixing * spec.avg_degree > spec.n - largest)
    throw ParameterError("infeasible spec: external degree exceeds nodes outside a community");
}

/// Samples a planted partition graph.
///
/// Nodes are split into contiguous near-equal communities. Each pair inside a
/// community is linked with probability (1 - mixing) * d / (s - 1) and each
/// pair across communities with mixing * d / (n - s), which gives every node
/// expected degree d. Isolated nodes are then linked to a random peer of
/// their own community.
inline Benchmark generate(const PlantedPartitionSpec& spec) {
  validate(spec);
  const NodeId n = spec.n;
  const NodeId k = spec.communities;

  GroundTruth truth;
  truth.assignment.resize(n);
  std::vector<NodeId> begin(k + 1);
  for (NodeId c = 0; c <= k; ++c)
    begin[c] = static_cast<NodeId>(static_cast<std::uint64_t>(c) * n / k);
  for (NodeId c = 0; c < k; ++c)
    for (NodeId u = begin[c]; u < begin[c + 1]; ++u) truth.assignment[u] = c;

  std::mt19937_64 rng(spec.seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(spec.avg_degree * n / 2 * 1.1) + 16);
  std::vector<std::size_t> degree(n, 0);
  auto link = [&](NodeId u, NodeId v) {
    edges.push_back({u, v});
    ++degree[u];
    ++degree[v];
  };

  for (NodeId c = 0; c < k; ++c) {
    const NodeId lo = begin[c];
    const NodeId hi = begin[c + 1];
    const double size = hi - lo;
    const double p_in = (1.0 - spec.mixing) * spec.avg_degree / (size - 1.0);
    const double p_out = spec.mixing * spec.avg_degree / (static_cast<double>(n) - size);
    for (NodeId u = lo; u < hi; ++u) {
      detail::bernoulli_range(rng, u + 1, hi, p_in, [&](NodeId v) { link(u, v); });
      // Pairs with lower communities were drawn when those were visited.
      detail::bernoulli_range(rng, hi, n, p_out, [&](NodeId v) { link(u, v); });
    }
  }

  for (NodeId u = 0; u < n; ++u) {
    if (degree[u] != 0) continue;
    const NodeId c = truth.assignment[u];
    const NodeId size = begin[c + 1] - begin[c];
    auto pick = static_cast<NodeId>(detail::unit_uniform(rng) * (size - 1));
    NodeId v = begin[c] + pick;
    if (v >= u) ++v;
    link(u, v);
  }

  return {Graph::from_edges(n, std::move(edges)), std::move(truth)};
}

/// Loads an externally generated benchmark (e.g. LFR network.dat and
/// community.dat). Every node of the graph must have a community and every
/// community line must name a node of the graph.
inline Benchmark ingest_lfr(std::istream& edges, std::istream& communities) {
  Benchmark b;
  b.graph = load_edge_list(edges);
  b.truth = load_ground_truth(communities, b.graph);
  return b;
}

}  // namespace ilpa
