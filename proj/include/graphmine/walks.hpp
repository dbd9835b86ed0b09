#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

#include "graphmine/error.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/random.hpp"

namespace graphmine {

/// Fixed-length walks stored back to back. Walk w = r * n + v is the r-th
/// walk started from node v.
struct WalkCorpus {
  std::size_t node_count = 0;
  std::size_t walk_length = 0;
  std::vector<NodeId> nodes;

  std::size_t walk_count() const noexcept { return walk_length == 0 ? 0 : nodes.size() / walk_length; }

  std::span<const NodeId> walk(std::size_t w) const noexcept {
    return {nodes.data() + w * walk_length, walk_length};
  }

  /// Occurrences of every node across all walks.
  std::vector<double> node_frequencies() const {
    std::vector<double> counts(node_count, 0.0);
    for (NodeId v : nodes) counts[v] += 1.0;
    return counts;
  }
};

namespace detail {

inline void fill_walk(const Graph& g, NodeId start, std::span<NodeId> out, RandomSource rng) {
  NodeId current = start;
  out[0] = current;
  for (std::size_t step = 1; step < out.size(); ++step) {
    const auto adj = g.neighbors(current);
    if (!adj.empty()) current = adj[rng.uniform_index(adj.size())];
    out[step] = current;
  }
}

}  // namespace detail

/// First-order uniform random walks, `walk_number` from every node. Walk w
/// draws from `rng.derive(w)`, so the corpus does not depend on `threads`.
inline WalkCorpus generate_walks(const Graph& g, std::size_t walk_number, std::size_t walk_length,
                                 const RandomSource& rng, std::size_t threads = 1) {
  require_connected(g);
  if (walk_number < 1 || walk_length < 1) {
    fail(ErrorCode::InvalidArgument, "walk_number and walk_length must be positive");
  }
  const std::size_t n = g.node_count();
  WalkCorpus corpus{n, walk_length, std::vector<NodeId>(walk_number * n * walk_length)};
  const std::size_t total = walk_number * n;

  auto run = [&](std::size_t first, std::size_t last) {
    for (std::size_t w = first; w < last; ++w) {
      std::span<NodeId> out(corpus.nodes.data() + w * walk_length, walk_length);
      detail::fill_walk(g, static_cast<NodeId>(w % n), out, rng.derive(w));
    }
  };

  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, total));
  if (threads == 1) {
    run(0, total);
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (total + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t first = t * chunk;
      const std::size_t last = std::min(total, first + chunk);
      if (first < last) workers.emplace_back(run, first, last);
    }
    for (auto& worker : workers) worker.join();
  }
  return corpus;
}

}  // namespace graphmine
