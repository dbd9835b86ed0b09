#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "graphmine/dense_matrix.hpp"
#include "graphmine/error.hpp"
#include "graphmine/random.hpp"

namespace graphmine {

/// Maps arbitrary integer labels to 0..c-1 by ascending label value.
inline std::vector<std::size_t> canonical_classes(std::span<const std::int64_t> labels,
                                                  std::size_t* class_count = nullptr) {
  std::vector<std::int64_t> distinct(labels.begin(), labels.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), labels[i]) - distinct.begin());
  }
  if (class_count != nullptr) *class_count = distinct.size();
  return out;
}

namespace detail {

// Summing sorted terms makes the result independent of the order in which
// the terms were produced, which keeps nmi(a, b) == nmi(b, a) bit for bit.
inline double ordered_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

inline double entropy(const std::map<std::int64_t, double>& counts, double total) {
  std::vector<double> terms;
  for (const auto& [label, count] : counts) {
    const double p = count / total;
    terms.push_back(-p * std::log(p));
  }
  return ordered_sum(std::move(terms));
}

}  // namespace detail

/// Normalized mutual information 2·I(A;B) / (H(A) + H(B)), natural logs.
/// Two trivial partitions score 1; exactly one trivial partition scores 0.
inline double nmi(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::LengthMismatch, "label vectors have lengths " + std::to_string(a.size()) +
                                        " and " + std::to_string(b.size()));
  }
  if (a.empty()) fail(ErrorCode::LengthMismatch, "label vectors are empty");
  const double total = static_cast<double>(a.size());
  std::map<std::int64_t, double> count_a;
  std::map<std::int64_t, double> count_b;
  std::map<std::pair<std::int64_t, std::int64_t>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    count_a[a[i]] += 1.0;
    count_b[b[i]] += 1.0;
    joint[{a[i], b[i]}] += 1.0;
  }
  const double ha = detail::entropy(count_a, total);
  const double hb = detail::entropy(count_b, total);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;
  std::vector<double> terms;
  for (const auto& [key, count] : joint) {
    const double pa = count_a[key.first] / total;
    const double pb = count_b[key.second] / total;
    const double pab = count / total;
    terms.push_back(pab * std::log(pab / (pa * pb)));
  }
  const double mutual = detail::ordered_sum(std::move(terms));
  return std::clamp(2.0 * mutual / (ha + hb), 0.0, 1.0);
}

inline double nmi(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  return nmi(std::span<const std::int64_t>(a), std::span<const std::int64_t>(b));
}

// ---------------------------------------------------------------------------

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

/// Seeded shuffle of 0..n-1; the first round(ratio·n) indices train.
inline SplitIndices train_test_split(std::size_t n, double ratio = 0.8, std::uint64_t seed = 42) {
  if (!(ratio > 0.0 && ratio < 1.0)) fail(ErrorCode::DegenerateSplit, "ratio must lie in (0, 1)");
  const auto train_size = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  if (n < 2 || train_size == 0 || train_size >= n) {
    fail(ErrorCode::DegenerateSplit, "split of " + std::to_string(n) + " items at ratio " +
                                         std::to_string(ratio) + " leaves an empty part");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RandomSource rng(seed, 0);
  rng.shuffle(std::span<std::size_t>(order));
  SplitIndices out;
  out.seed = seed;
  out.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_size));
  out.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_size), order.end());
  return out;
}

inline DenseMatrix select_rows(const DenseMatrix& x, std::span<const std::size_t> rows) {
  DenseMatrix out(rows.size(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(x.row(rows[i]).begin(), x.row(rows[i]).end(), out.row(i).begin());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Softmax regression

struct SoftmaxConfig {
  double l2 = 1e-4;
  double learning_rate = 0.1;
  std::size_t epochs = 500;
};

/// Multinomial logistic regression. Weights are (d + 1) x c; the last row
/// is the bias and is not regularized.
class SoftmaxModel : public SoftmaxConfig {
 public:
  explicit SoftmaxModel(SoftmaxConfig config = {}) : SoftmaxConfig(config) {}

  const DenseMatrix& weights() const noexcept { return weights_; }
  std::size_t class_count() const noexcept { return weights_.cols(); }

  void set_weights(DenseMatrix w) { weights_ = std::move(w); }

  /// Row-wise class probabilities.
  DenseMatrix predict_proba(const DenseMatrix& x) const {
    if (weights_.rows() != x.cols() + 1) {
      fail(ErrorCode::DimensionMismatch, "feature width does not match the fitted model");
    }
    const std::size_t c = weights_.cols();
    DenseMatrix out(x.rows(), c);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      auto logits = out.row(i);
      for (std::size_t k = 0; k < c; ++k) logits[k] = weights_(x.cols(), k);
      for (std::size_t f = 0; f < x.cols(); ++f) {
        const double xf = x(i, f);
        for (std::size_t k = 0; k < c; ++k) logits[k] += xf * weights_(f, k);
      }
      const double top = *std::max_element(logits.begin(), logits.end());
      double total = 0.0;
      for (double& z : logits) {
        z = std::exp(z - top);
        total += z;
      }
      for (double& z : logits) z /= total;
    }
    return out;
  }

  /// Mean cross-entropy plus (l2 / 2)·‖W without bias‖².
  double loss(const DenseMatrix& x, std::span<const std::size_t> y) const {
    const DenseMatrix p = predict_proba(x);
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) total -= std::log(std::max(p(i, y[i]), 1e-300));
    double penalty = 0.0;
    for (std::size_t f = 0; f < x.cols(); ++f) {
      for (std::size_t k = 0; k < weights_.cols(); ++k) penalty += weights_(f, k) * weights_(f, k);
    }
    return total / static_cast<double>(x.rows()) + 0.5 * l2 * penalty;
  }

  DenseMatrix gradient(const DenseMatrix& x, std::span<const std::size_t> y) const {
    DenseMatrix p = predict_proba(x);
    for (std::size_t i = 0; i < x.rows(); ++i) p(i, y[i]) -= 1.0;
    const double inv = 1.0 / static_cast<double>(x.rows());
    DenseMatrix grad(weights_.rows(), weights_.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t k = 0; k < weights_.cols(); ++k) {
        const double r = p(i, k) * inv;
        for (std::size_t f = 0; f < x.cols(); ++f) grad(f, k) += x(i, f) * r;
        grad(x.cols(), k) += r;
      }
    }
    for (std::size_t f = 0; f < x.cols(); ++f) {
      for (std::size_t k = 0; k < weights_.cols(); ++k) grad(f, k) += l2 * weights_(f, k);
    }
    return grad;
  }

 private:
  DenseMatrix weights_;
};

/// Full-batch gradient descent from zero weights. A step that raises the
/// loss is undone and the learning rate halved.
inline SoftmaxModel softmax_fit(const DenseMatrix& x, std::span<const std::size_t> y,
                                std::size_t class_count, SoftmaxConfig config = {}) {
  if (x.rows() != y.size()) {
    fail(ErrorCode::DimensionMismatch, std::to_string(x.rows()) + " feature rows but " +
                                           std::to_string(y.size()) + " labels");
  }
  if (x.rows() == 0) fail(ErrorCode::DimensionMismatch, "no training rows");
  if (class_count < 2) fail(ErrorCode::InvalidArgument, "need at least two classes");
  for (std::size_t label : y) {
    if (label >= class_count) fail(ErrorCode::InvalidArgument, "label outside class range");
  }
  SoftmaxModel model(config);
  model.set_weights(DenseMatrix(x.cols() + 1, class_count, 0.0));
  double rate = config.learning_rate;
  double current = model.loss(x, y);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const DenseMatrix grad = model.gradient(x, y);
    DenseMatrix previous = model.weights();
    DenseMatrix next = previous;
    while (true) {
      for (std::size_t i = 0; i < next.values().size(); ++i) {
        next.values()[i] = previous.values()[i] - rate * grad.values()[i];
      }
      model.set_weights(next);
      const double candidate = model.loss(x, y);
      if (candidate <= current) {
        current = candidate;
        break;
      }
      rate *= 0.5;
      if (rate < 1e-12) {
        model.set_weights(previous);
        return model;
      }
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// AUC

/// Mann-Whitney AUC with midranks for ties. `positive[i]` marks positives.
inline double binary_auc(std::span<const char> positive, std::span<const double> scores) {
  if (positive.size() != scores.size()) fail(ErrorCode::LengthMismatch, "labels and scores differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  double positives = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (positive[order[k]]) rank_sum += midrank;
    }
    i = j;
  }
  for (char p : positive) positives += p ? 1.0 : 0.0;
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    fail(ErrorCode::SingleClassTest, "AUC needs at least one positive and one negative");
  }
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

/// Binary (two score columns): AUC of column 1 for class 1. Multiclass:
/// unweighted mean of one-vs-rest AUCs over the classes present in y_true.
inline double auc(std::span<const std::size_t> y_true, const DenseMatrix& scores) {
  if (y_true.size() != scores.rows()) fail(ErrorCode::LengthMismatch, "labels and scores differ in length");
  const std::size_t c = scores.cols();
  std::vector<char> present(c, 0);
  for (std::size_t label : y_true) {
    if (label >= c) fail(ErrorCode::DimensionMismatch, "label outside score columns");
    present[label] = 1;
  }
  if (std::count(present.begin(), present.end(), 1) < 2) {
    fail(ErrorCode::SingleClassTest, "test labels contain a single class");
  }
  std::vector<char> positive(y_true.size());
  std::vector<double> column(y_true.size());
  auto one_vs_rest = [&](std::size_t k) {
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      positive[i] = y_true[i] == k;
      column[i] = scores(i, k);
    }
    return binary_auc(positive, column);
  };
  if (c == 2) return one_vs_rest(1);
  double total = 0.0;
  double evaluated = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    if (!present[k]) continue;
    total += one_vs_rest(k);
    evaluated += 1.0;
  }
  return total / evaluated;
}

/// Split, fit softmax on the training rows, and score the test rows.
inline double classification_auc(const DenseMatrix& x, std::span<const std::int64_t> labels,
                                  double ratio, std::uint64_t seed, SoftmaxConfig config = {}) {
  if (x.rows() != labels.size()) {
    fail(ErrorCode::LengthMismatch, std::to_string(x.rows()) + " embedding rows but " +
                                        std::to_string(labels.size()) + " labels");
  }
  std::size_t classes = 0;
  const auto y = canonical_classes(labels, &classes);
  if (classes < 2) fail(ErrorCode::SingleClassTest, "labels contain a single class");
  const SplitIndices split = train_test_split(x.rows(), ratio, seed);
  std::vector<std::size_t> y_train;
  std::vector<std::size_t> y_test;
  for (std::size_t i : split.train) y_train.push_back(y[i]);
  for (std::size_t i : split.test) y_test.push_back(y[i]);
  const SoftmaxModel model = softmax_fit(select_rows(x, split.train), y_train, classes, config);
  return auc(y_test, model.predict_proba(select_rows(x, split.test)));
}

}  // namespace graphmine
