#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphmine/dense_matrix.hpp"
#include "graphmine/error.hpp"
#include "graphmine/graph.hpp"
#include "graphmine/graph_matrices.hpp"
#include "graphmine/linalg.hpp"
#include "graphmine/random.hpp"
#include "graphmine/sparse_matrix.hpp"

namespace graphmine {

using NodeFeatures = std::map<NodeId, std::string>;

/// Ordered graphs with optional per-node string features and optional labels.
struct GraphCorpus {
  std::vector<Graph> graphs;
  std::vector<std::optional<NodeFeatures>> features;  // empty, or one entry per graph
  std::optional<std::vector<std::int64_t>> labels;

  GraphCorpus() = default;
  explicit GraphCorpus(std::vector<Graph> g) : graphs(std::move(g)) {}

  std::size_t size() const noexcept { return graphs.size(); }

  const NodeFeatures* features_of(std::size_t i) const noexcept {
    if (i >= features.size() || !features[i]) return nullptr;
    return &*features[i];
  }
};

template <class Model>
concept GraphEmbedder = requires(Model model, const GraphCorpus& corpus) {
  model.fit(corpus);
  { model.get_embedding() } -> std::convertible_to<const EmbeddingMatrix&>;
};

namespace detail {

inline void require_all_connected(const GraphCorpus& corpus) {
  if (corpus.size() == 0) fail(ErrorCode::EmptyCorpus, "graph corpus is empty");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!is_connected(corpus.graphs[i])) {
      fail(ErrorCode::DisconnectedGraph, "graph " + std::to_string(i) + " is not connected");
    }
  }
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::string hex64(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
  return buffer;
}

inline std::vector<double> laplacian_spectrum(const Graph& g) {
  if (g.node_count() > kDenseEigenCap) {
    fail(ErrorCode::GraphTooLarge, "graph with " + std::to_string(g.node_count()) +
                                       " nodes exceeds the dense eigensolver cap of " +
                                       std::to_string(kDenseEigenCap));
  }
  return eigenvalues_symmetric(normalized_laplacian(g).to_dense());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Weisfeiler-Lehman features

/// Pooled WL labels of one graph, sorted. Each entry is "<round>:<label>".
struct WlFeatureSet {
  std::vector<std::string> features;

  friend bool operator==(const WlFeatureSet&, const WlFeatureSet&) = default;
};

/// Round 0 labels are the supplied strings or decimal degrees. Round r+1
/// relabels a node with FNV-1a of its round-r label followed by the sorted
/// round-r labels of its neighbours, rendered as 16 hex digits.
inline std::vector<std::vector<std::string>> wl_labels(const Graph& g, const NodeFeatures* features,
                                                       std::size_t iterations) {
  const std::size_t n = g.node_count();
  std::vector<std::string> current(n);
  for (NodeId v = 0; v < n; ++v) {
    if (features != nullptr) {
      const auto it = features->find(v);
      if (it == features->end()) {
        fail(ErrorCode::IncompleteFeatureMap, "no feature for node " + std::to_string(v));
      }
      current[v] = it->second;
    } else {
      current[v] = std::to_string(g.degree(v));
    }
  }
  std::vector<std::vector<std::string>> rounds{current};
  std::vector<std::string_view> neighbourhood;
  for (std::size_t r = 0; r < iterations; ++r) {
    std::vector<std::string> next(n);
    for (NodeId v = 0; v < n; ++v) {
      neighbourhood.clear();
      for (NodeId u : g.neighbors(v)) neighbourhood.emplace_back(current[u]);
      std::sort(neighbourhood.begin(), neighbourhood.end());
      std::uint64_t h = detail::fnv1a(current[v]);
      h = detail::fnv1a("\x1f", h);
      for (std::string_view label : neighbourhood) {
        h = detail::fnv1a(label, h);
        h = detail::fnv1a("\x1e", h);
      }
      next[v] = detail::hex64(h);
    }
    current = std::move(next);
    rounds.push_back(current);
  }
  return rounds;
}

inline WlFeatureSet wl_features(const Graph& g, const NodeFeatures* features, std::size_t iterations) {
  const auto rounds = wl_labels(g, features, iterations);
  WlFeatureSet out;
  out.features.reserve(g.node_count() * rounds.size());
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    for (const auto& label : rounds[r]) out.features.push_back(std::to_string(r) + ":" + label);
  }
  std::sort(out.features.begin(), out.features.end());
  return out;
}

// ---------------------------------------------------------------------------
// WL features + TF-IDF + truncated SVD

struct WlSvdConfig {
  std::size_t wl_iterations = 2;
  std::size_t dimensions = 128;
  std::uint64_t seed = 42;
};

/// Graphs x features TF-IDF matrix (tf = raw count, idf = ln(N / df)).
inline SparseMatrix wl_tfidf_matrix(const GraphCorpus& corpus, std::size_t iterations) {
  std::vector<WlFeatureSet> sets;
  sets.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    sets.push_back(wl_features(corpus.graphs[i], corpus.features_of(i), iterations));
  }
  std::vector<std::string> vocabulary;
  for (const auto& set : sets) {
    vocabulary.insert(vocabulary.end(), set.features.begin(), set.features.end());
  }
  std::sort(vocabulary.begin(), vocabulary.end());
  vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());

  std::vector<Triplet> counts;
  std::vector<double> document_frequency(vocabulary.size(), 0.0);
  for (std::size_t g = 0; g < sets.size(); ++g) {
    const auto& features = sets[g].features;
    for (std::size_t i = 0; i < features.size();) {
      std::size_t j = i;
      while (j < features.size() && features[j] == features[i]) ++j;
      const auto column = static_cast<std::size_t>(
          std::lower_bound(vocabulary.begin(), vocabulary.end(), features[i]) - vocabulary.begin());
      counts.push_back({g, column, static_cast<double>(j - i)});
      document_frequency[column] += 1.0;
      i = j;
    }
  }
  const double documents = static_cast<double>(corpus.size());
  const SparseMatrix tf = SparseMatrix::from_triplets(corpus.size(), vocabulary.size(), std::move(counts));
  return tf.transform([&](std::size_t, std::size_t col, double count) {
    return count * std::log(documents / document_frequency[col]);
  });
}

/// Rows are U·diag(σ) of the TF-IDF matrix, truncated to `dimensions`.
/// Directions beyond the numerical rank (σ <= 1e-10 σ_max) are zero columns.
inline EmbeddingMatrix wl_svd_fit(const GraphCorpus& corpus, const WlSvdConfig& config) {
  detail::require_all_connected(corpus);
  if (config.dimensions < 1) fail(ErrorCode::InvalidArgument, "dimensions must be positive");
  const SparseMatrix tfidf = wl_tfidf_matrix(corpus, config.wl_iterations);
  EmbeddingMatrix out(corpus.size(), config.dimensions);
  const std::size_t rank = std::min({config.dimensions, tfidf.rows(), tfidf.cols()});
  if (tfidf.nonzeros() == 0 || rank == 0) return out;
  const SvdResult svd = randomized_svd(tfidf, rank, RandomSource(config.seed, 0));
  const double cutoff = 1e-10 * svd.singular_values.front();
  for (std::size_t j = 0; j < rank; ++j) {
    if (svd.singular_values[j] <= cutoff) break;
    for (std::size_t g = 0; g < corpus.size(); ++g) out(g, j) = svd.u(g, j) * svd.singular_values[j];
  }
  return out;
}

class WlSvd : public WlSvdConfig {
 public:
  explicit WlSvd(WlSvdConfig config = {}) : WlSvdConfig(config) {}

  void fit(const GraphCorpus& corpus) { embedding_ = wl_svd_fit(corpus, *this); }

  const EmbeddingMatrix& get_embedding() const {
    if (!embedding_) fail(ErrorCode::NotFitted, "WL-SVD has not been fitted");
    return *embedding_;
  }

 private:
  std::optional<EmbeddingMatrix> embedding_;
};

// ---------------------------------------------------------------------------
// Spectral fingerprints

struct SfConfig {
  std::size_t dimensions = 32;
};

/// Smallest normalized-Laplacian eigenvalues, ascending, zero padded.
inline EmbeddingMatrix sf_fit(const GraphCorpus& corpus, const SfConfig& config) {
  detail::require_all_connected(corpus);
  EmbeddingMatrix out(corpus.size(), config.dimensions);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto spectrum = detail::laplacian_spectrum(corpus.graphs[i]);
    const std::size_t kept = std::min(config.dimensions, spectrum.size());
    for (std::size_t j = 0; j < kept; ++j) out(i, j) = spectrum[j];
  }
  return out;
}

class Sf : public SfConfig {
 public:
  explicit Sf(SfConfig config = {}) : SfConfig(config) {}

  void fit(const GraphCorpus& corpus) { embedding_ = sf_fit(corpus, *this); }

  const EmbeddingMatrix& get_embedding() const {
    if (!embedding_) fail(ErrorCode::NotFitted, "SF has not been fitted");
    return *embedding_;
  }

 private:
  std::optional<EmbeddingMatrix> embedding_;
};

struct NetLsdConfig {
  std::size_t time_points = 250;
  double time_min = 1e-2;
  double time_max = 1e2;
};

inline std::vector<double> netlsd_time_grid(const NetLsdConfig& config) {
  std::vector<double> t(config.time_points);
  const double lo = std::log10(config.time_min);
  const double hi = std::log10(config.time_max);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double frac = t.size() == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(t.size() - 1);
    t[i] = std::pow(10.0, lo + (hi - lo) * frac);
  }
  return t;
}

/// Heat-trace signature h(t) = Σ exp(-t λ) over normalized-Laplacian eigenvalues.
inline EmbeddingMatrix netlsd_fit(const GraphCorpus& corpus, const NetLsdConfig& config) {
  detail::require_all_connected(corpus);
  const auto times = netlsd_time_grid(config);
  EmbeddingMatrix out(corpus.size(), times.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto spectrum = detail::laplacian_spectrum(corpus.graphs[i]);
    for (std::size_t j = 0; j < times.size(); ++j) {
      double trace = 0.0;
      for (double lambda : spectrum) trace += std::exp(-times[j] * lambda);
      out(i, j) = trace;
    }
  }
  return out;
}

class NetLsd : public NetLsdConfig {
 public:
  explicit NetLsd(NetLsdConfig config = {}) : NetLsdConfig(config) {}

  void fit(const GraphCorpus& corpus) { embedding_ = netlsd_fit(corpus, *this); }

  const EmbeddingMatrix& get_embedding() const {
    if (!embedding_) fail(ErrorCode::NotFitted, "NetLSD has not been fitted");
    return *embedding_;
  }

 private:
  std::optional<EmbeddingMatrix> embedding_;
};

}  // namespace graphmine
