#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "graphmine/error.hpp"
#include "graphmine/random.hpp"

namespace graphmine {

using NodeId = std::uint32_t;
using EdgeInput = std::pair<std::int64_t, std::int64_t>;

/// Immutable undirected simple graph over nodes 0..n-1.
///
/// Adjacency is stored in CSR form with every neighbor list sorted
/// ascending. Each undirected edge appears twice, once per endpoint.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }

  bool has_edge(NodeId u, NodeId v) const noexcept {
    const auto adj = neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
  }

  /// Each undirected edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<std::pair<NodeId, NodeId>> edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
      for (NodeId v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const NodeId> adjacency() const noexcept { return neighbors_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph build_graph(std::int64_t, std::span<const EdgeInput>);

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> neighbors_;
};

/// Builds a graph from an undirected edge list. (u, v) and (v, u) name the
/// same edge; listing it twice is an error, as is a self-loop.
inline Graph build_graph(std::int64_t n, std::span<const EdgeInput> edges) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "graph must have at least one node");
  if (n > static_cast<std::int64_t>(std::numeric_limits<NodeId>::max())) {
    fail(ErrorCode::GraphTooLarge, "node count exceeds 32-bit id range");
  }
  const auto count = static_cast<std::size_t>(n);
  std::vector<std::size_t> degree(count, 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      fail(ErrorCode::OutOfRangeNode, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                          ") has an endpoint outside 0.." + std::to_string(n - 1));
    }
    if (u == v) fail(ErrorCode::SelfLoop, "self-loop on node " + std::to_string(u));
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
  }

  Graph g;
  g.offsets_.assign(count + 1, 0);
  for (std::size_t v = 0; v < count; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.neighbors_.resize(g.offsets_[count]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    g.neighbors_[cursor[static_cast<std::size_t>(u)]++] = static_cast<NodeId>(v);
    g.neighbors_[cursor[static_cast<std::size_t>(v)]++] = static_cast<NodeId>(u);
  }
  for (std::size_t v = 0; v < count; ++v) {
    auto first = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last);
    if (auto dup = std::adjacent_find(first, last); dup != last) {
      fail(ErrorCode::DuplicateEdge, "duplicate edge (" + std::to_string(v) + "," +
                                         std::to_string(*dup) + ")");
    }
  }
  return g;
}

inline Graph build_graph(std::int64_t n, std::initializer_list<EdgeInput> edges) {
  return build_graph(n, std::span<const EdgeInput>(edges.begin(), edges.size()));
}

inline Graph build_graph(std::int64_t n, const std::vector<EdgeInput>& edges) {
  return build_graph(n, std::span<const EdgeInput>(edges));
}

struct ValidationReport {
  bool is_connected = false;
  bool is_contiguous = false;
  bool has_self_loops = false;
  bool has_duplicates = false;
  std::size_t isolated_node_count = 0;
};

/// Number of nodes reachable from `start` by breadth-first search.
inline std::size_t reachable_count(const Graph& g, NodeId start = 0) {
  if (g.node_count() == 0) return 0;
  std::vector<char> seen(g.node_count(), 0);
  std::queue<NodeId> frontier;
  frontier.push(start);
  seen[start] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached;
}

inline bool is_connected(const Graph& g) {
  return g.node_count() > 0 && reachable_count(g) == g.node_count();
}

inline ValidationReport validate_graph(const Graph& g) {
  ValidationReport report;
  const std::size_t n = g.node_count();
  report.is_contiguous = n > 0;
  report.is_connected = is_connected(g);
  for (NodeId v = 0; v < n; ++v) {
    const auto adj = g.neighbors(v);
    if (adj.empty()) ++report.isolated_node_count;
    if (std::binary_search(adj.begin(), adj.end(), v)) report.has_self_loops = true;
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) report.has_duplicates = true;
    for (NodeId u : adj) {
      if (u >= n) report.is_contiguous = false;
    }
  }
  return report;
}

/// Throws DisconnectedGraph unless every node is reachable from node 0.
inline void require_connected(const Graph& g) {
  if (!is_connected(g)) fail(ErrorCode::DisconnectedGraph, "graph is not connected");
}

inline std::uint64_t max_edge_count(std::uint64_t n) { return n * (n - 1) / 2; }

/// Uniform G(n, m): m distinct unordered pairs drawn without replacement.
///
/// Rejection sampling over a hash set; above half density the complement
/// is sampled instead so the expected cost stays O(m).
inline Graph erdos_renyi_gnm(std::int64_t n, std::int64_t m, RandomSource rng) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "graph must have at least one node");
  if (m < 0) fail(ErrorCode::InvalidArgument, "edge count must be nonnegative");
  const auto nodes = static_cast<std::uint64_t>(n);
  const std::uint64_t capacity = max_edge_count(nodes);
  if (static_cast<std::uint64_t>(m) > capacity) {
    fail(ErrorCode::TooManyEdges, "too many edges: " + std::to_string(m) + " > n(n-1)/2 = " +
                                      std::to_string(capacity));
  }
  const bool complement = static_cast<std::uint64_t>(m) > capacity / 2;
  const std::uint64_t draws = complement ? capacity - static_cast<std::uint64_t>(m)
                                         : static_cast<std::uint64_t>(m);

  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(draws * 2);
  std::vector<std::uint64_t> order;
  order.reserve(draws);
  while (order.size() < draws) {
    std::uint64_t u = rng.uniform_index(nodes);
    std::uint64_t v = rng.uniform_index(nodes);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    const std::uint64_t key = u * nodes + v;
    if (chosen.insert(key).second) order.push_back(key);
  }

  std::vector<EdgeInput> edges;
  edges.reserve(static_cast<std::size_t>(m));
  if (complement) {
    for (std::uint64_t u = 0; u < nodes; ++u) {
      for (std::uint64_t v = u + 1; v < nodes; ++v) {
        if (!chosen.contains(u * nodes + v)) {
          edges.emplace_back(static_cast<std::int64_t>(u), static_cast<std::int64_t>(v));
        }
      }
    }
  } else {
    for (std::uint64_t key : order) {
      edges.emplace_back(static_cast<std::int64_t>(key / nodes),
                         static_cast<std::int64_t>(key % nodes));
    }
  }
  return build_graph(n, edges);
}

/// G(n, m) conditioned on connectivity: attempt i uses stream_id + i, at
/// most `max_attempts` attempts.
inline Graph connected_erdos_renyi_gnm(std::int64_t n, std::int64_t m, std::uint64_t seed,
                                       std::uint64_t stream_id = 0, int max_attempts = 100) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Graph g = erdos_renyi_gnm(n, m, RandomSource(seed, stream_id + static_cast<std::uint64_t>(attempt)));
    if (is_connected(g)) return g;
  }
  fail(ErrorCode::ConnectivityRetryExhausted,
       "no connected G(" + std::to_string(n) + "," + std::to_string(m) + ") sample in " +
           std::to_string(max_attempts) + " attempts");
}

/// Triangles incident to each node, by merging sorted adjacency lists.
inline std::vector<std::size_t> triangles_per_node(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> count(n, 0);
  for (NodeId u = 0; u < n; ++u) {
    const auto adj_u = g.neighbors(u);
    for (NodeId v : adj_u) {
      if (v <= u) continue;
      const auto adj_v = g.neighbors(v);
      // Common neighbours w > v, so each triangle u < v < w is seen once.
      auto a = std::upper_bound(adj_u.begin(), adj_u.end(), v);
      auto b = std::upper_bound(adj_v.begin(), adj_v.end(), v);
      while (a != adj_u.end() && b != adj_v.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++count[u];
          ++count[v];
          ++count[*a];
          ++a;
          ++b;
        }
      }
    }
  }
  return count;
}

inline std::vector<double> local_clustering(const Graph& g) {
  const auto triangles = triangles_per_node(g);
  std::vector<double> cc(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const double d = static_cast<double>(g.degree(v));
    if (d >= 2) cc[v] = 2.0 * static_cast<double>(triangles[v]) / (d * (d - 1.0));
  }
  return cc;
}

}  // namespace graphmine
