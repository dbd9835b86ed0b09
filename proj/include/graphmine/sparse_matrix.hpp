#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "graphmine/dense_matrix.hpp"
#include "graphmine/error.hpp"

namespace graphmine {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix of doubles. Column indices are sorted and
/// unique within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Builds from (row, col, value) triplets; duplicate coordinates are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
      if (t.row >= rows || t.col >= cols) {
        fail(ErrorCode::DimensionMismatch, "triplet coordinate outside matrix shape");
      }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    SparseMatrix m(rows, cols);
    for (std::size_t i = 0; i < triplets.size();) {
      std::size_t j = i;
      double sum = 0.0;
      while (j < triplets.size() && triplets[j].row == triplets[i].row &&
             triplets[j].col == triplets[i].col) {
        sum += triplets[j].value;
        ++j;
      }
      m.column_indices_.push_back(triplets[i].col);
      m.values_.push_back(sum);
      ++m.row_offsets_[triplets[i].row + 1];
      i = j;
    }
    for (std::size_t r = 0; r < rows; ++r) m.row_offsets_[r + 1] += m.row_offsets_[r];
    return m;
  }

  /// Keeps the nonzero entries of a dense matrix.
  static SparseMatrix from_dense(const DenseMatrix& a) {
    SparseMatrix m(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        if (a(r, c) != 0.0) {
          m.column_indices_.push_back(c);
          m.values_.push_back(a(r, c));
        }
      }
      m.row_offsets_[r + 1] = m.values_.size();
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> column_indices() const noexcept { return column_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const std::size_t> row_columns(std::size_t r) const noexcept {
    return {column_indices_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
  }
  std::span<const double> row_values(std::size_t r) const noexcept {
    return {values_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
  }

  double at(std::size_t r, std::size_t c) const noexcept {
    const auto cols = row_columns(r);
    const auto it = std::lower_bound(cols.begin(), cols.end(), c);
    if (it == cols.end() || *it != c) return 0.0;
    return row_values(r)[static_cast<std::size_t>(it - cols.begin())];
  }

  DenseMatrix to_dense() const {
    DenseMatrix out(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      const auto cols = row_columns(r);
      const auto vals = row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) out(r, cols[k]) = vals[k];
    }
    return out;
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols_, rows_);
    for (std::size_t c : column_indices_) ++t.row_offsets_[c + 1];
    for (std::size_t c = 0; c < cols_; ++c) t.row_offsets_[c + 1] += t.row_offsets_[c];
    t.column_indices_.resize(values_.size());
    t.values_.resize(values_.size());
    std::vector<std::size_t> cursor(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
        const std::size_t slot = cursor[column_indices_[k]]++;
        t.column_indices_[slot] = r;
        t.values_[slot] = values_[k];
      }
    }
    return t;
  }

  /// Applies `fn(row, col, value) -> value` to every stored entry and drops
  /// entries that become exactly zero.
  template <class Fn>
  SparseMatrix transform(Fn&& fn) const {
    SparseMatrix out(rows_, cols_);
    out.column_indices_.reserve(values_.size());
    out.values_.reserve(values_.size());
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k) {
        const double v = fn(r, column_indices_[k], values_[k]);
        if (v != 0.0) {
          out.column_indices_.push_back(column_indices_[k]);
          out.values_.push_back(v);
        }
      }
      out.row_offsets_[r + 1] = out.values_.size();
    }
    return out;
  }

 private:
  SparseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), row_offsets_(rows + 1, 0) {}

  friend SparseMatrix multiply(const SparseMatrix&, const SparseMatrix&);
  friend SparseMatrix add(const SparseMatrix&, const SparseMatrix&);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> column_indices_;
  std::vector<double> values_;
};

/// a·x for dense x.
inline DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& x) {
  if (a.cols() != x.rows()) fail(ErrorCode::DimensionMismatch, "inner dimensions differ");
  DenseMatrix out(a.rows(), x.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto out_row = out.row(r);
    const auto cols = a.row_columns(r);
    const auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto x_row = x.row(cols[k]);
      const double v = vals[k];
      for (std::size_t j = 0; j < x.cols(); ++j) out_row[j] += v * x_row[j];
    }
  }
  return out;
}

/// aᵀ·x for dense x, without forming aᵀ.
inline DenseMatrix multiply_transposed(const SparseMatrix& a, const DenseMatrix& x) {
  if (a.rows() != x.rows()) fail(ErrorCode::DimensionMismatch, "row counts differ");
  DenseMatrix out(a.cols(), x.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto x_row = x.row(r);
    const auto cols = a.row_columns(r);
    const auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      auto out_row = out.row(cols[k]);
      const double v = vals[k];
      for (std::size_t j = 0; j < x.cols(); ++j) out_row[j] += v * x_row[j];
    }
  }
  return out;
}

/// Sparse-sparse product (row-wise Gustavson with a dense accumulator).
inline SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::DimensionMismatch, "inner dimensions differ");
  SparseMatrix out(a.rows(), b.cols());
  std::vector<double> accumulator(b.cols(), 0.0);
  std::vector<char> occupied(b.cols(), 0);
  std::vector<std::size_t> touched;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    touched.clear();
    const auto a_cols = a.row_columns(r);
    const auto a_vals = a.row_values(r);
    for (std::size_t k = 0; k < a_cols.size(); ++k) {
      const auto b_cols = b.row_columns(a_cols[k]);
      const auto b_vals = b.row_values(a_cols[k]);
      for (std::size_t t = 0; t < b_cols.size(); ++t) {
        const std::size_t c = b_cols[t];
        if (!occupied[c]) {
          occupied[c] = 1;
          touched.push_back(c);
        }
        accumulator[c] += a_vals[k] * b_vals[t];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t c : touched) {
      out.column_indices_.push_back(c);
      out.values_.push_back(accumulator[c]);
      accumulator[c] = 0.0;
      occupied[c] = 0;
    }
    out.row_offsets_[r + 1] = out.values_.size();
  }
  return out;
}

inline SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }
  SparseMatrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto ac = a.row_columns(r);
    const auto av = a.row_values(r);
    const auto bc = b.row_columns(r);
    const auto bv = b.row_values(r);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ac.size() || j < bc.size()) {
      if (j == bc.size() || (i < ac.size() && ac[i] < bc[j])) {
        out.column_indices_.push_back(ac[i]);
        out.values_.push_back(av[i++]);
      } else if (i == ac.size() || bc[j] < ac[i]) {
        out.column_indices_.push_back(bc[j]);
        out.values_.push_back(bv[j++]);
      } else {
        out.column_indices_.push_back(ac[i]);
        out.values_.push_back(av[i++] + bv[j++]);
      }
    }
    out.row_offsets_[r + 1] = out.values_.size();
  }
  return out;
}

inline double frobenius_norm(const SparseMatrix& a) {
  double sum = 0.0;
  for (double v : a.values()) sum += v * v;
  return std::sqrt(sum);
}

}  // namespace graphmine
