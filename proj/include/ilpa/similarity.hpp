#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <vector>

#include "ilpa/graph.hpp"

namespace ilpa {

/// Exact link similarity value (1 + |N(i) ∩ N(j)|) / |N(j)|.
///
/// Kept as a rational so that the initialization condition compares values
/// without rounding; ordering uses cross multiplication.
struct Tsi {
  std::uint32_t numerator = 0;
  std::uint32_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / denominator; }

  /// Common-neighbor count this value was built from.
  std::uint32_t common() const { return numerator - 1; }

  friend std::strong_ordering operator<=>(const Tsi& a, const Tsi& b) {
    return static_cast<std::uint64_t>(a.numerator) * b.denominator <=>
           static_cast<std::uint64_t>(b.numerator) * a.denominator;
  }
  friend bool operator==(const Tsi& a, const Tsi& b) { return (a <=> b) == 0; }

  /// numerator/denominator >= threshold. The quotient is the correctly
  /// rounded double of the exact ratio, so a threshold written as the same
  /// decimal (e.g. 7/20 vs 0.35) compares equal.
  bool at_least(double threshold) const { return value() >= threshold; }
};

/// tsi(i, j) for an edge (i, j). Throws DomainError on a non-edge.
inline Tsi tsi(const Graph& g, NodeId i, NodeId j) {
  if (i >= g.node_count() || j >= g.node_count() || !g.has_edge(i, j))
    throw DomainError("tsi is defined only on edges");
  return {static_cast<std::uint32_t>(1 + common_neighbors(g, i, j)),
          static_cast<std::uint32_t>(g.degree(j))};
}

/// Both directed tsi values for every edge, laid out per adjacency slot:
/// the value stored at slot (i, k) is tsi(i, neighbors(i)[k]).
class TsiTable {
public:
  TsiTable() = default;

  explicit TsiTable(const Graph& g) : graph_(&g), values_(g.slot_count()) {
    for (const auto& e : g.edges()) {
      const auto common = static_cast<std::uint32_t>(common_neighbors(g, e.u, e.v));
      values_[g.offset(e.u) + g.neighbor_index(e.u, e.v)] = {
          common + 1, static_cast<std::uint32_t>(g.degree(e.v))};
      values_[g.offset(e.v) + g.neighbor_index(e.v, e.u)] = {
          common + 1, static_cast<std::uint32_t>(g.degree(e.u))};
    }
  }

  /// Value for the k-th neighbor of i.
  Tsi at_slot(NodeId i, std::size_t k) const { return values_[graph_->offset(i) + k]; }

  Tsi operator()(NodeId i, NodeId j) const {
    auto k = graph_->neighbor_index(i, j);
    if (k == Graph::npos) throw DomainError("tsi is defined only on edges");
    return at_slot(i, k);
  }

  std::span<const Tsi> slots() const { return values_; }
  const Graph& graph() const { return *graph_; }

  /// Largest stored value; {0,1} on an edgeless graph.
  Tsi max() const {
    Tsi best{0, 1};
    for (const auto& t : values_) best = std::max(best, t);
    return best;
  }

private:
  const Graph* graph_ = nullptr;
  std::vector<Tsi> values_;
};

inline TsiTable compute_tsi_table(const Graph& g) { return TsiTable(g); }

/// "i j tsi_ij tsi_ji" per undirected edge, six fractional digits.
inline void write_tsi_table(std::ostream& out, const TsiTable& table) {
  const Graph& g = table.graph();
  char buf[64];
  for (const auto& e : g.edges()) {
    std::snprintf(buf, sizeof buf, " %.6f %.6f\n", table(e.u, e.v).value(), table(e.v, e.u).value());
    out << g.name(e.u) << ' ' << g.name(e.v) << buf;
  }
}

}  // namespace ilpa
