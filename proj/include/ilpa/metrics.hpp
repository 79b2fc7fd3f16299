#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "ilpa/graph.hpp"

namespace ilpa {

/// Disjoint cover of nodes [0, n) by non-empty blocks.
///
/// Block ids are canonical: 0..k-1 ordered by each block's smallest member,
/// so two labelings describing the same grouping yield equal partitions.
class Partition {
public:
  Partition() = default;

  template <typename Label>
  static Partition from_labels(std::span<const Label> labels) {
    Partition p;
    p.block_of_.resize(labels.size());
    std::unordered_map<Label, CommunityId> renumber;
    renumber.reserve(labels.size());
    for (std::size_t u = 0; u < labels.size(); ++u) {
      auto [it, _] = renumber.emplace(labels[u], static_cast<CommunityId>(renumber.size()));
      p.block_of_[u] = it->second;
    }
    p.block_count_ = renumber.size();
    return p;
  }

  template <typename Label>
  static Partition from_labels(const std::vector<Label>& labels) {
    return from_labels(std::span<const Label>(labels));
  }

  std::size_t node_count() const { return block_of_.size(); }
  std::size_t block_count() const { return block_count_; }
  std::span<const CommunityId> block_of() const { return block_of_; }
  CommunityId block_of(NodeId u) const { return block_of_[u]; }

  std::vector<std::vector<NodeId>> blocks() const {
    std::vector<std::vector<NodeId>> out(block_count_);
    for (NodeId u = 0; u < block_of_.size(); ++u) out[block_of_[u]].push_back(u);
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

private:
  std::vector<CommunityId> block_of_;
  std::size_t block_count_ = 0;
};

inline std::size_t community_count(const Partition& p) { return p.block_count(); }

/// Newman modularity, aggregated per block:
/// Q = sum_c [ e_c / m - (d_c / 2m)^2 ].
inline double modularity(const Graph& g, const Partition& p) {
  if (p.node_count() != g.node_count())
    throw InputError("partition covers " + std::to_string(p.node_count()) +
                     " nodes, graph has " + std::to_string(g.node_count()));
  if (g.edge_count() == 0) throw DomainError("modularity is undefined on a graph without edges");

  std::vector<std::uint64_t> internal(p.block_count(), 0);
  std::vector<std::uint64_t> volume(p.block_count(), 0);
  for (const auto& e : g.edges())
    if (p.block_of(e.u) == p.block_of(e.v)) ++internal[p.block_of(e.u)];
  for (NodeId u = 0; u < g.node_count(); ++u) volume[p.block_of(u)] += g.degree(u);

  const double m = static_cast<double>(g.edge_count());
  double q = 0.0;
  for (std::size_t c = 0; c < p.block_count(); ++c) {
    const double share = static_cast<double>(volume[c]) / (2.0 * m);
    q += static_cast<double>(internal[c]) / m - share * share;
  }
  return q;
}

/// Normalized mutual information 2 I(X;Y) / (H(X) + H(Y)), natural log.
///
/// Two single-block partitions score 1; a single block against anything with
/// positive entropy scores 0.
inline double nmi(const Partition& a, const Partition& b) {
  if (a.node_count() != b.node_count())
    throw InputError("partitions cover different node sets");
  const std::size_t n = a.node_count();
  if (n == 0) throw InputError("partitions are empty");

  std::vector<std::size_t> size_a(a.block_count(), 0);
  std::vector<std::size_t> size_b(b.block_count(), 0);
  std::unordered_map<std::uint64_t, std::size_t> joint;
  for (NodeId u = 0; u < n; ++u) {
    ++size_a[a.block_of(u)];
    ++size_b[b.block_of(u)];
    ++joint[(static_cast<std::uint64_t>(a.block_of(u)) << 32) | b.block_of(u)];
  }

  const double total = static_cast<double>(n);
  auto entropy = [total](const std::vector<std::size_t>& sizes) {
    double h = 0.0;
    for (auto s : sizes) {
      const double p = static_cast<double>(s) / total;
      h -= p * std::log(p);
    }
    return h;
  };
  const double ha = entropy(size_a);
  const double hb = entropy(size_b);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;

  double info = 0.0;
  for (const auto& [key, count] : joint) {
    const auto ra = static_cast<double>(size_a[key >> 32]);
    const auto rb = static_cast<double>(size_b[key & 0xffffffffu]);
    const auto c = static_cast<double>(count);
    info += c / total * std::log(c * total / (ra * rb));
  }
  return std::clamp(2.0 * info / (ha + hb), 0.0, 1.0);
}

}  // namespace ilpa
