#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "graphmine/dense_matrix.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/sparse_matrix.hpp"

namespace graphmine {

namespace detail {

inline void require_no_isolated(const Graph& g) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) == 0) fail(ErrorCode::IsolatedNode, "node " + std::to_string(v) + " is isolated");
  }
}

template <class WeightFn>
SparseMatrix graph_operator(const Graph& g, WeightFn&& weight, bool with_diagonal) {
  std::vector<Triplet> triplets;
  triplets.reserve(2 * g.edge_count() + (with_diagonal ? g.node_count() : 0));
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (with_diagonal) triplets.push_back({u, u, 1.0});
    for (NodeId v : g.neighbors(u)) triplets.push_back({u, v, weight(u, v)});
  }
  return SparseMatrix::from_triplets(g.node_count(), g.node_count(), std::move(triplets));
}

}  // namespace detail

inline SparseMatrix adjacency_matrix(const Graph& g) {
  return detail::graph_operator(g, [](NodeId, NodeId) { return 1.0; }, false);
}

/// Random-walk transition matrix P = D⁻¹A.
inline SparseMatrix transition_matrix(const Graph& g) {
  detail::require_no_isolated(g);
  return detail::graph_operator(
      g, [&g](NodeId u, NodeId) { return 1.0 / static_cast<double>(g.degree(u)); }, false);
}

/// L = I - D^{-1/2} A D^{-1/2}. Entry (u, v) and (v, u) are computed by the
/// same expression, so the result is exactly symmetric.
inline SparseMatrix normalized_laplacian(const Graph& g) {
  detail::require_no_isolated(g);
  std::vector<double> inv_sqrt(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  }
  return detail::graph_operator(
      g, [&](NodeId u, NodeId v) { return -(inv_sqrt[u] * inv_sqrt[v]); }, true);
}

/// Combinatorial Laplacian D - A, dense.
inline DenseMatrix laplacian_dense(const Graph& g) {
  DenseMatrix out(g.node_count(), g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    out(u, u) = static_cast<double>(g.degree(u));
    for (NodeId v : g.neighbors(u)) out(u, v) = -1.0;
  }
  return out;
}

}  // namespace graphmine
