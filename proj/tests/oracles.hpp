#pragma once

// Brute-force reference implementations and fixture builders shared by the
// unit tests and the acceptance runner. Everything here works on dense
// matrices and explicit enumeration; none of it calls the code under test
// unless noted.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <vector>

#include "graphmine/dense_matrix.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/linalg.hpp"
#include "graphmine/random.hpp"

namespace oracle {

using graphmine::DenseMatrix;
using graphmine::EdgeInput;
using graphmine::Graph;
using graphmine::NodeId;
using graphmine::RandomSource;

inline DenseMatrix dense_adjacency(const Graph& g) {
  const std::size_t n = g.node_count();
  DenseMatrix a(n, n);
  for (const auto& [u, v] : g.edges()) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

// Q = 1/(2m) Σ_ij [A_ij - k_i k_j / (2m)] δ(c_i, c_j)
inline double modularity(const Graph& g, const std::vector<std::int64_t>& labels) {
  const DenseMatrix a = dense_adjacency(g);
  const std::size_t n = g.node_count();
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[i] != labels[j]) continue;
      const double ki = static_cast<double>(g.degree(static_cast<NodeId>(i)));
      const double kj = static_cast<double>(g.degree(static_cast<NodeId>(j)));
      q += a(i, j) - ki * kj / two_m;
    }
  }
  return q / two_m;
}

// Triangles through each node by enumerating all node triples.
inline std::vector<std::size_t> triangles(const Graph& g) {
  const NodeId n = static_cast<NodeId>(g.node_count());
  std::vector<std::size_t> out(n, 0);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      if (!g.has_edge(a, b)) continue;
      for (NodeId c = b + 1; c < n; ++c) {
        if (g.has_edge(a, c) && g.has_edge(b, c)) {
          ++out[a];
          ++out[b];
          ++out[c];
        }
      }
    }
  }
  return out;
}

// Eigenvalues of the unnormalized Laplacian of the path on n nodes.
inline std::vector<double> path_laplacian_spectrum(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = 2.0 - 2.0 * std::cos(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// WCC objective straight from its definition: for each node v with
// t(v,V) > 0, (t(v,C)/t(v,V)) · vt(v,V) / (|C \ {v}| + vt(v, V \ C)),
// averaged over all nodes. Triangles are recounted from scratch.
inline double wcc_objective(const Graph& g, const std::vector<std::int64_t>& labels) {
  const NodeId n = static_cast<NodeId>(g.node_count());
  auto closes = [&](NodeId v, NodeId a, NodeId b) {
    return a != b && g.has_edge(v, a) && g.has_edge(v, b) && g.has_edge(a, b);
  };
  double total = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    std::size_t t_all = 0;
    std::size_t t_in = 0;
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (a == v || b == v || !closes(v, a, b)) continue;
        ++t_all;
        if (labels[a] == labels[v] && labels[b] == labels[v]) ++t_in;
      }
    }
    if (t_all == 0 || t_in == 0) continue;
    auto vt = [&](const std::function<bool(NodeId)>& in_set) {
      std::size_t count = 0;
      for (NodeId y = 0; y < n; ++y) {
        if (y == v || !in_set(y)) continue;
        bool found = false;
        for (NodeId z = 0; z < n && !found; ++z) {
          if (z != v && z != y && in_set(z) && closes(v, y, z)) found = true;
        }
        if (found) ++count;
      }
      return count;
    };
    const std::size_t vt_all = vt([](NodeId) { return true; });
    const std::size_t vt_out = vt([&](NodeId y) { return labels[y] != labels[v]; });
    std::size_t community_size = 0;
    for (NodeId y = 0; y < n; ++y) community_size += labels[y] == labels[v] ? 1 : 0;
    total += (static_cast<double>(t_in) / static_cast<double>(t_all)) *
             (static_cast<double>(vt_all) / static_cast<double>(community_size - 1 + vt_out));
  }
  return total / static_cast<double>(n);
}

// Calls visit(labels) for every set partition of {0..n-1} as a restricted
// growth string.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  std::vector<std::int64_t> labels(n, 0);
  std::function<void(std::size_t, std::int64_t)> step = [&](std::size_t i, std::int64_t used) {
    if (i == n) {
      visit(labels);
      return;
    }
    for (std::int64_t c = 0; c <= used; ++c) {
      labels[i] = c;
      step(i + 1, std::max(used, c + 1));
    }
  };
  step(0, 0);
}

// Singular values (descending) of a dense matrix through the eigenvalues
// of its Gram matrix.
inline std::vector<double> singular_values(const DenseMatrix& m) {
  DenseMatrix gram(m.cols(), m.cols());
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, i) * m(r, j);
      gram(i, j) = s;
    }
  }
  auto eig = graphmine::eigenvalues_symmetric(gram);
  std::vector<double> out;
  for (auto it = eig.rbegin(); it != eig.rend(); ++it) out.push_back(std::sqrt(std::max(*it, 0.0)));
  return out;
}

inline DenseMatrix dense_product(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  }
  return out;
}

// log(max(M, 1)) for M = vol/(b T) (Σ_{r=1..T} Pʳ) D⁻¹, by explicit powers.
inline DenseMatrix netmf_target(const Graph& g, std::size_t order, double negatives) {
  const std::size_t n = g.node_count();
  const DenseMatrix a = dense_adjacency(g);
  DenseMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) p(i, j) = a(i, j) / static_cast<double>(g.degree(static_cast<NodeId>(i)));
  }
  DenseMatrix power = p;
  DenseMatrix sum = p;
  for (std::size_t r = 2; r <= order; ++r) {
    power = dense_product(power, p);
    for (std::size_t i = 0; i < n * n; ++i) sum.values()[i] += power.values()[i];
  }
  const double volume = 2.0 * static_cast<double>(g.edge_count());
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double m = volume / (negatives * static_cast<double>(order)) * sum(i, j) /
                       static_cast<double>(g.degree(static_cast<NodeId>(j)));
      out(i, j) = std::log(std::max(m, 1.0));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixtures

inline Graph clique_pair(std::size_t size) {
  std::vector<EdgeInput> edges;
  const auto s = static_cast<std::int64_t>(size);
  for (std::int64_t block = 0; block < 2; ++block) {
    for (std::int64_t i = 0; i < s; ++i) {
      for (std::int64_t j = i + 1; j < s; ++j) edges.emplace_back(block * s + i, block * s + j);
    }
  }
  edges.emplace_back(s - 1, s);
  return graphmine::build_graph(2 * s, edges);
}

inline std::vector<std::int64_t> clique_pair_labels(std::size_t size) {
  std::vector<std::int64_t> labels(2 * size, 0);
  std::fill(labels.begin() + static_cast<std::ptrdiff_t>(size), labels.end(), 1);
  return labels;
}

inline Graph path(std::size_t n) {
  std::vector<EdgeInput> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return graphmine::build_graph(static_cast<std::int64_t>(n), edges);
}

inline Graph complete(std::size_t n) {
  std::vector<EdgeInput> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return graphmine::build_graph(static_cast<std::int64_t>(n), edges);
}

// Two blocks of `block` nodes; in-block pairs linked with p_in, cross pairs
// with p_out. Resampled until connected.
inline Graph planted_partition(std::size_t block, double p_in, double p_out, RandomSource rng) {
  const std::size_t n = 2 * block;
  while (true) {
    std::vector<EdgeInput> edges;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double p = (i < block) == (j < block) ? p_in : p_out;
        if (rng.uniform() < p) edges.emplace_back(i, j);
      }
    }
    Graph g = graphmine::build_graph(static_cast<std::int64_t>(n), edges);
    if (graphmine::is_connected(g)) return g;
  }
}

inline std::vector<NodeId> random_permutation(std::size_t n, RandomSource& rng) {
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  rng.shuffle(std::span<NodeId>(perm));
  return perm;
}

// Node v of g becomes node perm[v].
inline Graph relabel(const Graph& g, const std::vector<NodeId>& perm) {
  std::vector<EdgeInput> edges;
  for (const auto& [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return graphmine::build_graph(static_cast<std::int64_t>(g.node_count()), edges);
}

// Connected G(n, m) with n and m drawn from the given ranges.
inline Graph random_connected(RandomSource& rng, std::size_t min_n, std::size_t max_n) {
  const std::size_t n = min_n + rng.uniform_index(max_n - min_n + 1);
  const std::size_t cap = n * (n - 1) / 2;
  const std::size_t m = (n - 1) + rng.uniform_index(cap - (n - 1) + 1);
  return graphmine::connected_erdos_renyi_gnm(static_cast<std::int64_t>(n), static_cast<std::int64_t>(m),
                                              rng(), 0, 1000);
}

template <class Memberships>
std::vector<std::int64_t> labels_of(const Memberships& mm) {
  const auto a = mm.assignments();
  return std::vector<std::int64_t>(a.begin(), a.end());
}

inline double max_relative_error(const std::vector<double>& got, const std::vector<double>& want) {
  double worst = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    worst = std::max(worst, std::abs(got[i] - want[i]) / std::max(std::abs(want[i]), 1e-300));
  }
  return worst;
}

}  // namespace oracle
