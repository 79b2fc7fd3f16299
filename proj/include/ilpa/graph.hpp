#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ilpa {

using NodeId = std::uint32_t;
using CommunityId = std::uint32_t;

/// Malformed or unresolvable input data (files, streams). CLI exit code 1.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range algorithm or generator parameter. CLI exit code 2.
class ParameterError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Query outside the domain of a function (e.g. tsi on a non-edge).
class DomainError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

struct Edge {
  NodeId u;
  NodeId v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable undirected simple graph in compressed sparse row form.
///
/// Nodes are dense ids [0, n). Every undirected edge {u, v} is stored once in
/// edges() with u < v and twice in the adjacency arrays. Adjacency lists are
/// strictly ascending, so neighbor queries and intersections run on sorted
/// ranges.
class Graph {
public:
  Graph() = default;

  /// Builds from an arbitrary list of pairs: self-loops and duplicates are
  /// removed. `names` supplies external ids; when empty, ids are "0".."n-1".
  static Graph from_edges(NodeId n, std::vector<Edge> edges,
                          std::vector<std::string> names = {}) {
    Graph g;
    g.n_ = n;
    for (auto& e : edges) {
      if (e.u >= n || e.v >= n)
        throw InputError("edge endpoint out of range");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.edges_ = std::move(edges);

    g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.neighbors_.resize(g.offsets_.back());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    // With edges_ sorted by (u, v), every (w, x) with w < x is placed before
    // every (x, w), and each group arrives ascending.
    for (const auto& e : g.edges_) g.neighbors_[fill[e.v]++] = e.u;
    for (const auto& e : g.edges_) g.neighbors_[fill[e.u]++] = e.v;

    if (names.empty()) {
      names.reserve(n);
      for (NodeId x = 0; x < n; ++x) names.push_back(std::to_string(x));
    }
    if (names.size() != n) throw InputError("name table size does not match node count");
    g.names_ = std::move(names);
    g.index_.reserve(n);
    for (NodeId x = 0; x < n; ++x) {
      if (!g.index_.emplace(g.names_[x], x).second)
        throw InputError("duplicate external id '" + g.names_[x] + "'");
    }
    return g;
  }

  NodeId node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  /// Position of u's adjacency list inside the flat neighbor array. Per-slot
  /// tables (e.g. the tsi table) index by offset(u) + k.
  std::size_t offset(NodeId u) const { return offsets_[u]; }
  std::size_t slot_count() const { return neighbors_.size(); }

  bool has_edge(NodeId u, NodeId v) const {
    auto adj = neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  /// Index of v within neighbors(u), or npos.
  std::size_t neighbor_index(NodeId u, NodeId v) const {
    auto adj = neighbors(u);
    auto it = std::lower_bound(adj.begin(), adj.end(), v);
    if (it == adj.end() || *it != v) return npos;
    return static_cast<std::size_t>(it - adj.begin());
  }

  const std::string& name(NodeId u) const { return names_[u]; }
  std::span<const std::string> names() const { return names_; }

  std::optional<NodeId> find(std::string_view external) const {
    auto it = index_.find(std::string(external));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_ && a.offsets_ == b.offsets_ &&
           a.neighbors_ == b.neighbors_ && a.names_ == b.names_;
  }

private:
  NodeId n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Node to community assignment, total over the nodes of a graph.
struct GroundTruth {
  std::vector<CommunityId> assignment;
  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct LoadStats {
  std::size_t lines = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline bool is_skippable(std::string_view line) {
  auto first = line.find_first_not_of(" \t\r\n");
  return first == std::string_view::npos || line[first] == '#' || line[first] == '%';
}

}  // namespace detail

/// Reads a whitespace separated "u v" edge list. External ids are arbitrary
/// tokens mapped to dense ids in order of first appearance.
inline Graph load_edge_list(std::istream& in, LoadStats* stats = nullptr) {
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> index;
  std::vector<Edge> edges;
  LoadStats local;

  auto intern = [&](std::string_view token) {
    auto [it, inserted] = index.emplace(std::string(token), static_cast<NodeId>(names.size()));
    if (inserted) names.emplace_back(token);
    return it->second;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_skippable(line)) continue;
    auto tokens = detail::split_ws(line);
    if (tokens.size() != 2)
      throw InputError("line " + std::to_string(lineno) + ": expected 2 tokens, got " +
                       std::to_string(tokens.size()));
    ++local.lines;
    NodeId u = intern(tokens[0]);
    NodeId v = intern(tokens[1]);
    if (u == v) {
      ++local.self_loops;
      continue;
    }
    edges.push_back({u, v});
  }
  if (names.empty()) throw InputError("edge list contains no nodes");

  const std::size_t raw = edges.size();
  const auto n = static_cast<NodeId>(names.size());
  auto g = Graph::from_edges(n, std::move(edges), std::move(names));
  local.duplicates = raw - g.edge_count();
  if (stats) *stats = local;
  return g;
}

inline Graph load_edge_list(std::string_view text, LoadStats* stats = nullptr) {
  std::istringstream in{std::string(text)};
  return load_edge_list(in, stats);
}

/// Reads "node community" lines. Community tokens are arbitrary and are
/// renumbered densely in order of first appearance.
inline GroundTruth load_ground_truth(std::istream& in, const Graph& g) {
  constexpr CommunityId unset = static_cast<CommunityId>(-1);
  GroundTruth truth;
  truth.assignment.assign(g.node_count(), unset);
  std::unordered_map<std::string, CommunityId> communities;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_skippable(line)) continue;
    auto tokens = detail::split_ws(line);
    if (tokens.size() != 2)
      throw InputError("line " + std::to_string(lineno) + ": expected 2 tokens, got " +
                       std::to_string(tokens.size()));
    auto node = g.find(tokens[0]);
    if (!node)
      throw InputError("line " + std::to_string(lineno) + ": unknown node '" +
                       std::string(tokens[0]) + "'");
    auto [it, _] = communities.emplace(std::string(tokens[1]),
                                       static_cast<CommunityId>(communities.size()));
    truth.assignment[*node] = it->second;
  }

  std::string missing;
  std::size_t missing_count = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (truth.assignment[u] != unset) continue;
    if (missing_count++ < 20) missing += (missing.empty() ? "" : ", ") + g.name(u);
  }
  if (missing_count > 0) {
    if (missing_count > 20) missing += ", ...";
    throw InputError("ground truth missing " + std::to_string(missing_count) +
                     " node(s): " + missing);
  }
  return truth;
}

inline GroundTruth load_ground_truth(std::string_view text, const Graph& g) {
  std::istringstream in{std::string(text)};
  return load_ground_truth(in, g);
}

/// Writes g as an edge list using external ids.
///
/// Lines are ordered so that reloading with load_edge_list reproduces g
/// exactly, dense ids included. A node that cannot be introduced in id order
/// by one of its edges (e.g. an isolated node) gets a self-loop line.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  const NodeId n = g.node_count();
  std::vector<bool> seen(n, false);
  std::vector<bool> written(g.edge_count(), false);
  auto edge_index = [&](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    auto all = g.edges();
    return static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), Edge{a, b}) - all.begin());
  };
  auto emit = [&](NodeId a, NodeId b) {
    out << g.name(a) << ' ' << g.name(b) << '\n';
    written[edge_index(a, b)] = true;
    seen[a] = seen[b] = true;
  };

  for (NodeId x = 0; x < n; ++x) {
    if (seen[x]) continue;
    auto adj = g.neighbors(x);
    if (!adj.empty() && adj.front() < x) {
      emit(adj.front(), x);
    } else if (x + 1 < n && g.has_edge(x, x + 1)) {
      emit(x, x + 1);
    } else {
      // A self-loop line introduces x alone; the loader drops the loop.
      out << g.name(x) << ' ' << g.name(x) << '\n';
      seen[x] = true;
    }
  }
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    if (written[k]) continue;
    const auto& e = g.edges()[k];
    out << g.name(e.u) << ' ' << g.name(e.v) << '\n';
  }
}

inline void write_ground_truth(std::ostream& out, const Graph& g, std::span<const CommunityId> assignment) {
  for (NodeId u = 0; u < g.node_count(); ++u) out << g.name(u) << ' ' << assignment[u] << '\n';
}

/// |N(i) ∩ N(j)| by merging the two sorted adjacency lists.
inline std::size_t common_neighbors(const Graph& g, NodeId i, NodeId j) {
  auto a = g.neighbors(i);
  auto b = g.neighbors(j);
  std::size_t count = 0;
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() && y != b.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      ++count;
      ++x;
      ++y;
    }
  }
  return count;
}

}  // namespace ilpa
