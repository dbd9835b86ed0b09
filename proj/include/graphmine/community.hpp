#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphmine/dense_matrix.hpp"
#include "graphmine/error.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/graph_matrices.hpp"
#include "graphmine/random.hpp"
#include "graphmine/sparse_matrix.hpp"

namespace graphmine {

/// Node id -> cluster id. Cluster ids are canonical: 0..c-1 numbered in
/// order of first appearance when scanning nodes by ascending id.
class MembershipMap {
 public:
  MembershipMap() = default;

  /// Canonicalizes an arbitrary labelling; empty clusters disappear.
  template <class Label>
  static MembershipMap from_labels(std::span<const Label> labels) {
    MembershipMap out;
    out.assignment_.resize(labels.size());
    std::map<Label, std::size_t> ids;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto [it, inserted] = ids.try_emplace(labels[i], ids.size());
      out.assignment_[i] = it->second;
    }
    out.cluster_count_ = ids.size();
    return out;
  }

  template <class Label>
  static MembershipMap from_labels(const std::vector<Label>& labels) {
    return from_labels(std::span<const Label>(labels));
  }

  std::size_t size() const noexcept { return assignment_.size(); }
  std::size_t cluster_count() const noexcept { return cluster_count_; }
  std::size_t operator[](std::size_t node) const noexcept { return assignment_[node]; }
  std::span<const std::size_t> assignments() const noexcept { return assignment_; }

  friend bool operator==(const MembershipMap&, const MembershipMap&) = default;

 private:
  std::vector<std::size_t> assignment_;
  std::size_t cluster_count_ = 0;
};

/// Q = sum over clusters of e_c/m - (d_c/2m)^2.
inline double modularity(const Graph& g, const MembershipMap& memberships) {
  if (memberships.size() != g.node_count()) {
    fail(ErrorCode::IncompleteMembership,
         "membership covers " + std::to_string(memberships.size()) + " nodes, graph has " +
             std::to_string(g.node_count()));
  }
  const std::size_t m = g.edge_count();
  if (m == 0) return 0.0;
  const std::size_t clusters = memberships.cluster_count();
  std::vector<double> internal(clusters, 0.0);
  std::vector<double> degree(clusters, 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const std::size_t c = memberships[u];
    degree[c] += static_cast<double>(g.degree(u));
    for (NodeId v : g.neighbors(u)) {
      if (u < v && memberships[v] == c) internal[c] += 1.0;
    }
  }
  const double edges = static_cast<double>(m);
  double q = 0.0;
  for (std::size_t c = 0; c < clusters; ++c) {
    const double share = degree[c] / (2.0 * edges);
    q += internal[c] / edges - share * share;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Label propagation

struct LabelPropagationConfig {
  std::uint64_t seed = 42;
  std::size_t max_iterations = 100;
};

/// Asynchronous label propagation. Every round visits nodes in a fresh
/// seeded permutation; a node keeps its label while that label is among the
/// most frequent in its neighbourhood, otherwise it adopts one of the most
/// frequent labels chosen uniformly at random.
inline MembershipMap lp_fit(const Graph& g, const LabelPropagationConfig& config) {
  require_connected(g);
  const std::size_t n = g.node_count();
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), std::size_t{0});
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::vector<std::size_t> count(n, 0);
  std::vector<std::size_t> touched;
  std::vector<std::size_t> best;
  RandomSource order_rng(config.seed, 0);
  RandomSource tie_rng(config.seed, 1);

  for (std::size_t round = 0; round < config.max_iterations; ++round) {
    order_rng.shuffle(std::span<NodeId>(order));
    bool changed = false;
    for (NodeId v : order) {
      touched.clear();
      std::size_t top = 0;
      for (NodeId u : g.neighbors(v)) {
        const std::size_t l = label[u];
        if (count[l]++ == 0) touched.push_back(l);
        top = std::max(top, count[l]);
      }
      best.clear();
      for (std::size_t l : touched) {
        if (count[l] == top) best.push_back(l);
      }
      const bool keeps = count[label[v]] == top;
      for (std::size_t l : touched) count[l] = 0;
      if (keeps) continue;
      std::sort(best.begin(), best.end());
      label[v] = best[tie_rng.uniform_index(best.size())];
      changed = true;
    }
    if (!changed) break;
  }
  return MembershipMap::from_labels(label);
}

class LabelPropagation : public LabelPropagationConfig {
 public:
  explicit LabelPropagation(LabelPropagationConfig config = {}) : LabelPropagationConfig(config) {}

  void fit(const Graph& g) { memberships_ = lp_fit(g, *this); }

  const MembershipMap& get_memberships() const {
    if (!memberships_) fail(ErrorCode::NotFitted, "LabelPropagation has not been fitted");
    return *memberships_;
  }

 private:
  std::optional<MembershipMap> memberships_;
};

// ---------------------------------------------------------------------------
// SCD: triangle-based weighted community clustering (WCC)

namespace detail {

/// Per-node triangle lists and the WCC score of a node in its community.
class WccState {
 public:
  explicit WccState(const Graph& g) : triangles_(g.node_count()), stamp_(g.node_count(), 0) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const auto adj_u = g.neighbors(u);
      for (NodeId v : adj_u) {
        if (v <= u) continue;
        const auto adj_v = g.neighbors(v);
        auto a = std::upper_bound(adj_u.begin(), adj_u.end(), v);
        auto b = std::upper_bound(adj_v.begin(), adj_v.end(), v);
        while (a != adj_u.end() && b != adj_v.end()) {
          if (*a < *b) {
            ++a;
          } else if (*b < *a) {
            ++b;
          } else {
            const NodeId w = *a;
            triangles_[u].push_back({v, w});
            triangles_[v].push_back({u, w});
            triangles_[w].push_back({u, v});
            ++a;
            ++b;
          }
        }
      }
    }
    vt_total_.resize(g.node_count());
    for (NodeId x = 0; x < g.node_count(); ++x) {
      vt_total_[x] = distinct_partners(x, [](NodeId, NodeId) { return true; });
    }
  }

  std::size_t triangle_count(NodeId x) const { return triangles_[x].size(); }

  /// WCC(x, C) for C = community[x], community sizes given by `size`.
  double wcc(NodeId x, std::span<const std::size_t> community,
             std::span<const std::size_t> size) {
    const auto& tris = triangles_[x];
    if (tris.empty()) return 0.0;
    const std::size_t c = community[x];
    std::size_t inside = 0;
    for (const auto& [y, z] : tris) {
      if (community[y] == c && community[z] == c) ++inside;
    }
    if (inside == 0) return 0.0;
    const std::size_t outside_partners = distinct_partners(
        x, [&](NodeId y, NodeId z) { return community[y] != c && community[z] != c; });
    const double denominator = static_cast<double>(size[c] - 1 + outside_partners);
    return (static_cast<double>(inside) / static_cast<double>(tris.size())) *
           (static_cast<double>(vt_total_[x]) / denominator);
  }

 private:
  // Number of distinct nodes appearing in triangles of x accepted by `keep`.
  template <class Keep>
  std::size_t distinct_partners(NodeId x, Keep&& keep) {
    ++epoch_;
    std::size_t distinct = 0;
    for (const auto& [y, z] : triangles_[x]) {
      if (!keep(y, z)) continue;
      if (stamp_[y] != epoch_) {
        stamp_[y] = epoch_;
        ++distinct;
      }
      if (stamp_[z] != epoch_) {
        stamp_[z] = epoch_;
        ++distinct;
      }
    }
    return distinct;
  }

  std::vector<std::vector<std::pair<NodeId, NodeId>>> triangles_;
  std::vector<std::size_t> vt_total_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
};

}  // namespace detail

struct ScdConfig {
  std::size_t refinement_rounds = 25;
};

/// WCC of a partition: mean over nodes of WCC(v, C(v)).
inline double wcc_objective(const Graph& g, const MembershipMap& memberships) {
  detail::WccState state(g);
  std::vector<std::size_t> size(memberships.cluster_count(), 0);
  for (std::size_t v = 0; v < memberships.size(); ++v) ++size[memberships[v]];
  double total = 0.0;
  for (NodeId v = 0; v < g.node_count(); ++v) total += state.wcc(v, memberships.assignments(), size);
  return total / static_cast<double>(g.node_count());
}

/// Seeds communities around high-clustering nodes, then hill-climbs the
/// total WCC by single-node moves. Fully deterministic.
inline MembershipMap scd_fit(const Graph& g, const ScdConfig& config) {
  require_connected(g);
  const std::size_t n = g.node_count();
  detail::WccState state(g);
  const auto clustering = local_clustering(g);

  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return clustering[a] > clustering[b]; });

  constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> community(n, kUnassigned);
  std::vector<std::vector<NodeId>> members;
  for (NodeId v : order) {
    if (community[v] != kUnassigned) continue;
    const std::size_t id = members.size();
    members.push_back({v});
    community[v] = id;
    if (state.triangle_count(v) == 0) continue;
    for (NodeId u : g.neighbors(v)) {
      if (community[u] == kUnassigned && state.triangle_count(u) > 0) {
        community[u] = id;
        members[id].push_back(u);
      }
    }
  }
  // Room for every node to become a singleton.
  members.resize(std::max(members.size(), n));
  std::vector<std::size_t> free_ids;
  for (std::size_t id = members.size(); id-- > 0;) {
    if (members[id].empty()) free_ids.push_back(id);
  }
  std::vector<std::size_t> size(members.size());
  for (std::size_t id = 0; id < members.size(); ++id) size[id] = members[id].size();

  auto score = [&](std::size_t id) {
    double total = 0.0;
    for (NodeId x : members[id]) total += state.wcc(x, community, size);
    return total;
  };
  auto move = [&](NodeId v, std::size_t to) {
    const std::size_t from = community[v];
    auto& list = members[from];
    list.erase(std::find(list.begin(), list.end(), v));
    --size[from];
    members[to].push_back(v);
    ++size[to];
    community[v] = to;
  };

  std::vector<std::size_t> candidates;
  for (std::size_t round = 0; round < config.refinement_rounds; ++round) {
    bool moved = false;
    for (NodeId v = 0; v < n; ++v) {
      const std::size_t from = community[v];
      candidates.clear();
      for (NodeId u : g.neighbors(v)) {
        if (community[u] != from) candidates.push_back(community[u]);
      }
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      if (size[from] > 1 && !free_ids.empty()) candidates.push_back(free_ids.back());

      double best_gain = 1e-12;
      std::size_t best = from;
      for (std::size_t to : candidates) {
        const double before = score(from) + score(to);
        move(v, to);
        const double after = score(from) + score(to);
        move(v, from);
        if (after - before > best_gain) {
          best_gain = after - before;
          best = to;
        }
      }
      if (best == from) continue;
      if (!free_ids.empty() && best == free_ids.back()) free_ids.pop_back();
      move(v, best);
      if (size[from] == 0) free_ids.push_back(from);
      moved = true;
    }
    if (!moved) break;
  }
  return MembershipMap::from_labels(community);
}

class Scd : public ScdConfig {
 public:
  explicit Scd(ScdConfig config = {}) : ScdConfig(config) {}

  void fit(const Graph& g) { memberships_ = scd_fit(g, *this); }

  const MembershipMap& get_memberships() const {
    if (!memberships_) fail(ErrorCode::NotFitted, "SCD has not been fitted");
    return *memberships_;
  }

 private:
  std::optional<MembershipMap> memberships_;
};

// ---------------------------------------------------------------------------
// Symmetric NMF (overlapping; reduced to hard clusters by argmax)

struct SymNmfConfig {
  std::size_t dimensions = 32;
  std::size_t iterations = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 42;
};

struct SymNmfResult {
  EmbeddingMatrix factor;           // n x k, nonnegative
  MembershipMap memberships;
  std::vector<double> loss_history; // loss of every iterate, initial H first
};

namespace detail {

// ‖A - HHᵀ‖²_F = ‖A‖² - 2 Σ H∘(AH) + ‖HᵀH‖², without forming HHᵀ.
inline double symnmf_loss(double a_norm_sq, const DenseMatrix& h, const DenseMatrix& ah,
                          const DenseMatrix& hth) {
  double cross = 0.0;
  for (std::size_t i = 0; i < h.values().size(); ++i) cross += h.values()[i] * ah.values()[i];
  double gram = 0.0;
  for (double x : hth.values()) gram += x * x;
  return a_norm_sq - 2.0 * cross + gram;
}

}  // namespace detail

/// Row-wise argmax with exact ties broken uniformly at random.
inline MembershipMap argmax_memberships(const DenseMatrix& affinity, RandomSource rng) {
  std::vector<std::size_t> label(affinity.rows(), 0);
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < affinity.rows(); ++i) {
    const auto row = affinity.row(i);
    const double top = *std::max_element(row.begin(), row.end());
    ties.clear();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] == top) ties.push_back(j);
    }
    label[i] = ties.size() == 1 ? ties.front() : ties[rng.uniform_index(ties.size())];
  }
  return MembershipMap::from_labels(label);
}

/// Multiplicative updates H <- H ∘ (AH) / (H(HᵀH) + 1e-10) on ‖A - HHᵀ‖²_F,
/// damped whenever the full step would increase the loss.
inline SymNmfResult symnmf_fit(const Graph& g, const SymNmfConfig& config) {
  require_connected(g);
  const std::size_t n = g.node_count();
  const std::size_t k = config.dimensions;
  if (k < 1 || k > n) {
    fail(ErrorCode::RankTooLarge, "rank too large: " + std::to_string(k) + " factors for " +
                                      std::to_string(n) + " nodes");
  }
  constexpr double kEpsilon = 1e-10;
  const SparseMatrix a = adjacency_matrix(g);
  const double a_norm_sq = static_cast<double>(a.nonzeros());
  const double mean_a = a_norm_sq / (static_cast<double>(n) * static_cast<double>(n));
  const double scale = std::sqrt(mean_a / static_cast<double>(k));

  RandomSource init_rng(config.seed, 0);
  DenseMatrix h(n, k);
  for (double& x : h.values()) x = init_rng.uniform() * scale;

  SymNmfResult result;
  DenseMatrix ah = multiply(a, h);
  DenseMatrix hth = multiply_transposed(h, h);
  result.loss_history.push_back(detail::symnmf_loss(a_norm_sq, h, ah, hth));
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const DenseMatrix denominator = multiply(h, hth);
    std::vector<double> ratio(h.values().size());
    for (std::size_t i = 0; i < ratio.size(); ++i) {
      ratio[i] = ah.values()[i] / (denominator.values()[i] + kEpsilon);
    }
    const double previous = result.loss_history.back();
    // Full multiplicative step first; if it raises the loss, damp it as
    // H * (1 - step + step * ratio), halving step until the loss drops.
    double loss = previous;
    double step = 1.0;
    for (int attempt = 0; attempt < 40; ++attempt, step *= 0.5) {
      DenseMatrix candidate = h;
      for (std::size_t i = 0; i < ratio.size(); ++i) candidate.values()[i] *= 1.0 - step + step * ratio[i];
      DenseMatrix candidate_ah = multiply(a, candidate);
      DenseMatrix candidate_hth = multiply_transposed(candidate, candidate);
      const double candidate_loss = detail::symnmf_loss(a_norm_sq, candidate, candidate_ah, candidate_hth);
      if (candidate_loss <= previous) {
        h = std::move(candidate);
        ah = std::move(candidate_ah);
        hth = std::move(candidate_hth);
        loss = candidate_loss;
        break;
      }
    }
    result.loss_history.push_back(loss);
    if (std::abs(previous - loss) <= config.tolerance * std::max(previous, 1e-300)) break;
  }
  result.memberships = argmax_memberships(h, RandomSource(config.seed, 1));
  result.factor = std::move(h);
  return result;
}

class SymNmf : public SymNmfConfig {
 public:
  explicit SymNmf(SymNmfConfig config = {}) : SymNmfConfig(config) {}

  void fit(const Graph& g) { result_ = symnmf_fit(g, *this); }

  const MembershipMap& get_memberships() const { return fitted().memberships; }
  const EmbeddingMatrix& get_embedding() const { return fitted().factor; }
  const std::vector<double>& loss_history() const { return fitted().loss_history; }

 private:
  const SymNmfResult& fitted() const {
    if (!result_) fail(ErrorCode::NotFitted, "SymNMF has not been fitted");
    return *result_;
  }

  std::optional<SymNmfResult> result_;
};

}  // namespace graphmine
