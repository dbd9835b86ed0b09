#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <span>
#include <vector>

#ifdef __linux__
#include <sys/mman.h>
#endif

#include "graphmine/dense_matrix.hpp"
#include "graphmine/error.hpp"
#include "graphmine/random.hpp"
#include "graphmine/walks.hpp"

namespace graphmine {

struct SkipGramParams {
  std::size_t dimensions = 128;
  std::size_t window_size = 5;
  std::size_t negative_samples = 5;
  std::size_t epochs = 1;
  double learning_rate = 0.025;  // decays linearly to learning_rate / 100
  std::uint64_t seed = 42;
};

/// Walker alias table for O(1) draws from a discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(std::span<const double> weights)
      : probability_(weights.size(), 0.0), alias_(weights.size(), 0) {
    const std::size_t n = weights.size();
    double total = 0.0;
    for (double w : weights) total += w;
    if (n == 0 || !(total > 0.0)) fail(ErrorCode::InvalidArgument, "alias table needs positive mass");
    std::vector<double> scaled(n);
    std::vector<std::size_t> small;
    std::vector<std::size_t> large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back();
      small.pop_back();
      const std::size_t l = large.back();
      probability_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::size_t i : large) probability_[i] = 1.0;
    for (std::size_t i : small) probability_[i] = 1.0;
  }

  std::size_t sample(RandomSource& rng) const noexcept {
    const std::size_t column = rng.uniform_index(probability_.size());
    return rng.uniform() < probability_[column] ? column : alias_[column];
  }

  std::size_t size() const noexcept { return probability_.size(); }

 private:
  std::vector<double> probability_;
  std::vector<std::size_t> alias_;
};

namespace detail {

inline double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x) without overflow.
inline double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Zero-filled float table on 2 MiB boundaries. On Linux it asks for
// transparent huge pages, since training touches rows at random.
class FloatTable {
 public:
  explicit FloatTable(std::size_t count) : size_(count) {
    constexpr std::size_t kAlign = std::size_t{1} << 21;
    const std::size_t bytes = std::max<std::size_t>(1, (count * sizeof(float) + kAlign - 1) / kAlign) * kAlign;
    data_.reset(static_cast<float*>(std::aligned_alloc(kAlign, bytes)));
    if (!data_) throw std::bad_alloc();
#ifdef __linux__
    ::madvise(data_.get(), bytes, MADV_HUGEPAGE);
#endif
    std::fill_n(data_.get(), count, 0.0f);
  }

  float* data() noexcept { return data_.get(); }
  float* begin() noexcept { return data_.get(); }
  float* end() noexcept { return data_.get() + size_; }

 private:
  struct Free {
    void operator()(float* p) const noexcept { std::free(p); }
  };
  std::unique_ptr<float, Free> data_;
  std::size_t size_;
};

// Eight independent partial sums so the loop vectorizes under strict FP.
inline float dot_unrolled(const float* __restrict a, const float* __restrict b, std::size_t d) noexcept {
  float s[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= d; i += 8) {
    for (std::size_t j = 0; j < 8; ++j) s[j] += a[i + j] * b[i + j];
  }
  for (; i < d; ++i) s[0] += a[i] * b[i];
  return ((s[0] + s[1]) + (s[2] + s[3])) + ((s[4] + s[5]) + (s[6] + s[7]));
}

// step += g * v; v += g * u
inline void sgns_update(float* __restrict step, float* __restrict v, const float* __restrict u, float g,
                        std::size_t d) noexcept {
  for (std::size_t i = 0; i < d; ++i) {
    step[i] += g * v[i];
    v[i] += g * u[i];
  }
}

}  // namespace detail

/// Negative log-likelihood of one (center, context) pair with its negative
/// draws: -log σ(u·v) - Σ log σ(-u·v').
inline double sgns_pair_loss(std::span<const double> center, std::span<const double> context,
                             std::span<const std::span<const double>> negatives) {
  double loss = detail::softplus(-dot(center, context));
  for (const auto& negative : negatives) loss += detail::softplus(dot(center, negative));
  return loss;
}

struct SgnsGradient {
  std::vector<double> center;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

/// Analytic gradient of sgns_pair_loss with respect to every vector involved.
inline SgnsGradient sgns_pair_gradient(std::span<const double> center,
                                       std::span<const double> context,
                                       std::span<const std::span<const double>> negatives) {
  const std::size_t d = center.size();
  SgnsGradient grad{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0), {}};
  // d/dx softplus(-x) = σ(x) - 1; d/dx softplus(x) = σ(x).
  const double positive = detail::sigmoid(dot(center, context)) - 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    grad.center[i] += positive * context[i];
    grad.context[i] = positive * center[i];
  }
  for (const auto& negative : negatives) {
    const double coeff = detail::sigmoid(dot(center, negative));
    std::vector<double> g(d);
    for (std::size_t i = 0; i < d; ++i) {
      grad.center[i] += coeff * negative[i];
      g[i] = coeff * center[i];
    }
    grad.negatives.push_back(std::move(g));
  }
  return grad;
}

/// Skip-gram negative-sampling trainer over an arbitrary pair stream.
///
/// `for_each_pair(visit)` must call `visit(center, context)` for every
/// training pair in a fixed order, `pairs_per_epoch` times in total.
/// Negatives are drawn from `frequencies` raised to 0.75. Returns the center
/// vectors; if `pair_losses` is given, the loss of each pair evaluated just
/// before its update is appended to it.
template <class ForEachPair>
EmbeddingMatrix train_sgns(std::size_t vocabulary, std::span<const double> frequencies,
                           std::size_t pairs_per_epoch, ForEachPair&& for_each_pair,
                           const SkipGramParams& params, RandomSource rng,
                           std::vector<double>* pair_losses = nullptr) {
  if (vocabulary == 0 || pairs_per_epoch == 0) fail(ErrorCode::EmptyCorpus, "training corpus is empty");
  if (params.dimensions < 1 || params.window_size < 1 || params.negative_samples < 1 ||
      params.epochs < 1 || !(params.learning_rate > 0.0)) {
    fail(ErrorCode::InvalidArgument, "skip-gram hyperparameters must be positive");
  }
  const std::size_t d = params.dimensions;
  std::vector<double> noise(frequencies.size());
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = std::pow(frequencies[i], 0.75);
  const AliasTable sampler(noise);

  // Tables are single precision during training; the result is widened.
  RandomSource init_rng = rng.derive(0);
  RandomSource draw_rng = rng.derive(1);
  detail::FloatTable center(vocabulary * d);
  for (float& x : center) x = static_cast<float>((init_rng.uniform() - 0.5) / static_cast<double>(d));
  detail::FloatTable context(vocabulary * d);

  const double total = static_cast<double>(pairs_per_epoch * params.epochs);
  const double start_rate = params.learning_rate;
  std::size_t processed = 0;
  std::vector<float> center_step(d);
  std::vector<std::size_t> targets(params.negative_samples + 1);

  auto visit = [&](std::size_t c, std::size_t o) {
    const double rate =
        start_rate * (1.0 - 0.99 * static_cast<double>(processed) / total);
    ++processed;
    targets[0] = o;
    for (std::size_t k = 1; k < targets.size(); ++k) targets[k] = sampler.sample(draw_rng);

    float* const u = center.data() + c * d;
    // Rows are scattered across tables larger than cache; request them early.
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const float* v = context.data() + targets[k] * d;
      for (std::size_t i = 0; i < d; i += 16) __builtin_prefetch(v + i, 1);
    }
    if (pair_losses != nullptr) {
      double loss = 0.0;
      for (std::size_t k = 0; k < targets.size(); ++k) {
        const double x = detail::dot_unrolled(u, context.data() + targets[k] * d, d);
        loss += detail::softplus(k == 0 ? -x : x);
      }
      pair_losses->push_back(loss);
    }

    std::fill(center_step.begin(), center_step.end(), 0.0f);
    for (std::size_t k = 0; k < targets.size(); ++k) {
      float* const v = context.data() + targets[k] * d;
      const double label = k == 0 ? 1.0 : 0.0;
      // Same coefficient as sgns_pair_gradient, negated: descent step.
      const double g = (label - detail::sigmoid(detail::dot_unrolled(u, v, d))) * rate;
      detail::sgns_update(center_step.data(), v, u, static_cast<float>(g), d);
    }
    for (std::size_t i = 0; i < d; ++i) u[i] += center_step[i];
  };

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) for_each_pair(visit);
  return EmbeddingMatrix(vocabulary, d, std::vector<double>(center.begin(), center.end()));
}

/// All (walk[i], walk[j]) with 0 < |i - j| <= window.
template <class Visit>
void for_each_window_pair(const WalkCorpus& corpus, std::size_t window, Visit&& visit) {
  const std::size_t length = corpus.walk_length;
  for (std::size_t w = 0; w < corpus.walk_count(); ++w) {
    const auto walk = corpus.walk(w);
    for (std::size_t i = 0; i < length; ++i) {
      const std::size_t lo = i >= window ? i - window : 0;
      const std::size_t hi = std::min(length - 1, i + window);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j != i) visit(walk[i], walk[j]);
      }
    }
  }
}

inline std::size_t window_pair_count(const WalkCorpus& corpus, std::size_t window) {
  const std::size_t length = corpus.walk_length;
  std::size_t per_walk = 0;
  for (std::size_t i = 0; i < length; ++i) {
    per_walk += std::min(window, i) + std::min(window, length - 1 - i);
  }
  return per_walk * corpus.walk_count();
}

/// Skip-gram over a walk corpus with every pair inside the window.
inline EmbeddingMatrix sgns_train(const WalkCorpus& corpus, const SkipGramParams& params,
                                  std::vector<double>* pair_losses = nullptr) {
  if (corpus.walk_count() == 0 || corpus.walk_length < 2) {
    fail(ErrorCode::EmptyCorpus, "walk corpus has no training pairs");
  }
  const auto frequencies = corpus.node_frequencies();
  return train_sgns(
      corpus.node_count, frequencies, window_pair_count(corpus, params.window_size),
      [&](auto& visit) { for_each_window_pair(corpus, params.window_size, visit); }, params,
      RandomSource(params.seed, 1), pair_losses);
}

}  // namespace graphmine
