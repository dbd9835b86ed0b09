#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphmine/dense_matrix.hpp"
#include "graphmine/error.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/graph_matrices.hpp"
#include "graphmine/linalg.hpp"
#include "graphmine/sgns.hpp"
#include "graphmine/sparse_matrix.hpp"
#include "graphmine/walks.hpp"

namespace graphmine {

/// Anything with fit(graph) and get_embedding(); DeepWalk, Walklets and
/// NetMf all qualify.
template <class Model>
concept NodeEmbedder = requires(Model model, const Graph& g) {
  model.fit(g);
  { model.get_embedding() } -> std::convertible_to<const EmbeddingMatrix&>;
};

template <NodeEmbedder Model>
EmbeddingMatrix fit_embedding(Model& model, const Graph& g) {
  model.fit(g);
  return model.get_embedding();
}

// ---------------------------------------------------------------------------
// DeepWalk

struct DeepWalkConfig {
  std::size_t walk_number = 10;
  std::size_t walk_length = 80;
  std::size_t dimensions = 128;
  std::size_t window_size = 5;
  std::size_t negative_samples = 5;
  std::size_t epochs = 1;
  double learning_rate = 0.025;
  std::uint64_t seed = 42;
  std::size_t threads = 1;  // walk generation only

  SkipGramParams skip_gram() const {
    return {dimensions, window_size, negative_samples, epochs, learning_rate, seed};
  }
};

inline EmbeddingMatrix deepwalk_fit(const Graph& g, const DeepWalkConfig& config) {
  const WalkCorpus corpus = generate_walks(g, config.walk_number, config.walk_length,
                                           RandomSource(config.seed, 0), config.threads);
  return sgns_train(corpus, config.skip_gram());
}

class DeepWalk : public DeepWalkConfig {
 public:
  explicit DeepWalk(DeepWalkConfig config = {}) : DeepWalkConfig(config) {}

  void fit(const Graph& g) { embedding_ = deepwalk_fit(g, *this); }

  const EmbeddingMatrix& get_embedding() const {
    if (!embedding_) fail(ErrorCode::NotFitted, "DeepWalk has not been fitted");
    return *embedding_;
  }

 private:
  std::optional<EmbeddingMatrix> embedding_;
};

// ---------------------------------------------------------------------------
// Walklets

struct WalkletsConfig {
  std::size_t walk_number = 10;
  std::size_t walk_length = 80;
  std::size_t window_size = 4;   // number of scales
  std::size_t dimensions = 32;   // per scale
  std::size_t negative_samples = 5;
  std::size_t epochs = 1;
  double learning_rate = 0.025;
  std::uint64_t seed = 42;
  std::size_t threads = 1;
};

/// Calls visit(walk[i], walk[i + scale]) for every walk and valid i.
template <class Visit>
void for_each_offset_pair(const WalkCorpus& corpus, std::size_t scale, Visit&& visit) {
  for (std::size_t w = 0; w < corpus.walk_count(); ++w) {
    const auto walk = corpus.walk(w);
    for (std::size_t i = 0; i + scale < walk.size(); ++i) visit(walk[i], walk[i + scale]);
  }
}

inline std::vector<std::pair<NodeId, NodeId>> offset_pairs(const WalkCorpus& corpus, std::size_t scale) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for_each_offset_pair(corpus, scale, [&](NodeId a, NodeId b) { out.emplace_back(a, b); });
  return out;
}

/// One independent skip-gram model per offset 1..window_size, concatenated
/// in scale order.
inline EmbeddingMatrix walklets_fit(const Graph& g, const WalkletsConfig& config) {
  if (config.window_size < 1 || config.window_size >= config.walk_length) {
    fail(ErrorCode::InvalidArgument, "walklets window must be in 1..walk_length-1");
  }
  const WalkCorpus corpus = generate_walks(g, config.walk_number, config.walk_length,
                                           RandomSource(config.seed, 0), config.threads);
  const auto frequencies = corpus.node_frequencies();
  const std::size_t width = config.dimensions;
  EmbeddingMatrix out(g.node_count(), width * config.window_size);
  const RandomSource base(config.seed, 1);
  for (std::size_t scale = 1; scale <= config.window_size; ++scale) {
    const SkipGramParams params{width, 1, config.negative_samples, config.epochs,
                                config.learning_rate, config.seed};
    const std::size_t pairs = corpus.walk_count() * (corpus.walk_length - scale);
    const EmbeddingMatrix part = train_sgns(
        g.node_count(), frequencies, pairs,
        [&](auto& visit) { for_each_offset_pair(corpus, scale, visit); }, params,
        base.derive(scale));
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      std::copy(part.row(v).begin(), part.row(v).end(),
                out.row(v).begin() + static_cast<std::ptrdiff_t>((scale - 1) * width));
    }
  }
  return out;
}

class Walklets : public WalkletsConfig {
 public:
  explicit Walklets(WalkletsConfig config = {}) : WalkletsConfig(config) {}

  void fit(const Graph& g) { embedding_ = walklets_fit(g, *this); }

  const EmbeddingMatrix& get_embedding() const {
    if (!embedding_) fail(ErrorCode::NotFitted, "Walklets has not been fitted");
    return *embedding_;
  }

 private:
  std::optional<EmbeddingMatrix> embedding_;
};

// ---------------------------------------------------------------------------
// NetMF

struct NetMfConfig {
  std::size_t dimensions = 32;
  std::size_t order = 2;
  double negatives = 1.0;
  std::uint64_t seed = 42;
};

/// Largest graph NetMF accepts.
inline constexpr std::size_t kNetMfNodeCap = std::size_t{1} << 13;

/// log(max(M, 1)) for M = vol(G)/(b·T) · (Σ_{r=1..T} Pʳ) · D⁻¹.
/// Entries with M <= 1 map to zero, so the result keeps the sparsity of the
/// T-step reachability pattern.
inline SparseMatrix netmf_matrix(const Graph& g, std::size_t order, double negatives) {
  require_connected(g);
  if (order < 1 || !(negatives > 0.0)) {
    fail(ErrorCode::InvalidArgument, "NetMF order and negatives must be positive");
  }
  const SparseMatrix p = transition_matrix(g);
  SparseMatrix power = p;
  SparseMatrix sum = p;
  for (std::size_t r = 2; r <= order; ++r) {
    power = multiply(power, p);
    sum = add(sum, power);
  }
  const double volume = 2.0 * static_cast<double>(g.edge_count());
  const double scale = volume / (negatives * static_cast<double>(order));
  return sum.transform([&](std::size_t, std::size_t col, double value) {
    const double m = scale * value / static_cast<double>(g.degree(static_cast<NodeId>(col)));
    return m > 1.0 ? std::log(m) : 0.0;
  });
}

/// Embedding U·diag(√σ) from the rank-d factorization of the NetMF matrix.
inline EmbeddingMatrix netmf_fit(const Graph& g, const NetMfConfig& config) {
  require_connected(g);
  if (g.node_count() > kNetMfNodeCap) {
    fail(ErrorCode::GraphTooLarge, "NetMF is capped at " + std::to_string(kNetMfNodeCap) + " nodes");
  }
  if (config.dimensions < 1 || config.dimensions > g.node_count()) {
    fail(ErrorCode::RankTooLarge, "rank too large: " + std::to_string(config.dimensions) +
                                      " dimensions for " + std::to_string(g.node_count()) +
                                      " nodes");
  }
  const SparseMatrix target = netmf_matrix(g, config.order, config.negatives);
  const SvdResult svd = randomized_svd(target, config.dimensions, RandomSource(config.seed, 0));
  EmbeddingMatrix out(g.node_count(), config.dimensions);
  for (std::size_t j = 0; j < config.dimensions; ++j) {
    const double weight = std::sqrt(svd.singular_values[j]);
    for (std::size_t v = 0; v < g.node_count(); ++v) out(v, j) = svd.u(v, j) * weight;
  }
  return out;
}

class NetMf : public NetMfConfig {
 public:
  explicit NetMf(NetMfConfig config = {}) : NetMfConfig(config) {}

  void fit(const Graph& g) { embedding_ = netmf_fit(g, *this); }

  const EmbeddingMatrix& get_embedding() const {
    if (!embedding_) fail(ErrorCode::NotFitted, "NetMF has not been fitted");
    return *embedding_;
  }

 private:
  std::optional<EmbeddingMatrix> embedding_;
};

}  // namespace graphmine
