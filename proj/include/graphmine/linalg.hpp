#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "graphmine/dense_matrix.hpp"
#include "graphmine/error.hpp"
#include "graphmine/random.hpp"
#include "graphmine/sparse_matrix.hpp"

namespace graphmine {

/// Largest matrix the dense eigensolver accepts.
inline constexpr std::size_t kDenseEigenCap = 1024;

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix eigenvectors;         // column j pairs with eigenvalues[j]
};

struct SvdResult {
  DenseMatrix u;                       // rows x k
  std::vector<double> singular_values; // descending
  DenseMatrix v;                       // cols x k
};

namespace detail {

inline double off_diagonal_norm(const DenseMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

inline double frobenius_norm(const DenseMatrix& a) {
  double sum = 0.0;
  for (double x : a.values()) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace detail

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Sweeps over all (p, q) pairs in row order until the off-diagonal
/// Frobenius norm falls below 1e-12 (relative to ‖A‖_F once that exceeds
/// one), failing after 100 sweeps.
inline EigenDecomposition eig_symmetric(const DenseMatrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) fail(ErrorCode::NotSymmetric, "matrix is not square");
  if (n > kDenseEigenCap) {
    fail(ErrorCode::MatrixTooLarge, "dense eigensolver is capped at " +
                                        std::to_string(kDenseEigenCap) + " rows, got " +
                                        std::to_string(n));
  }
  double scale = 0.0;
  for (double x : input.values()) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > 1e-10 * std::max(1.0, scale)) {
        fail(ErrorCode::NotSymmetric, "matrix is not symmetric");
      }
    }
  }

  DenseMatrix a = input;
  DenseMatrix v = DenseMatrix::identity(n);
  const double tolerance = 1e-12 * std::max(1.0, detail::frobenius_norm(a));

  bool converged = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (detail::off_diagonal_norm(a) < tolerance) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && detail::off_diagonal_norm(a) >= tolerance) {
    fail(ErrorCode::NoConvergence, "Jacobi iteration did not converge in 100 sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[j], order[j]);
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, j) = v(k, order[j]);
  }
  return out;
}

/// Eigenvalues only, ascending.
inline std::vector<double> eigenvalues_symmetric(const DenseMatrix& a) {
  return eig_symmetric(a).eigenvalues;
}

/// Orthonormalizes columns in place by twice-iterated modified Gram-Schmidt.
/// Columns that are numerically dependent on earlier ones are zeroed.
inline void orthonormalize_columns(DenseMatrix& q) {
  // Work on rows of the transpose so every column sweep is contiguous.
  DenseMatrix qt = q.transpose();
  const std::size_t rows = q.rows();
  const std::size_t cols = q.cols();
  std::vector<double> original_norm(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    const double* x = qt.row(j).data();
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += x[i] * x[i];
    original_norm[j] = std::sqrt(s);
  }
  for (std::size_t j = 0; j < cols; ++j) {
    double* x = qt.row(j).data();
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const double* y = qt.row(k).data();
        double proj = 0.0;
        for (std::size_t i = 0; i < rows; ++i) proj += y[i] * x[i];
        for (std::size_t i = 0; i < rows; ++i) x[i] -= proj * y[i];
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) norm += x[i] * x[i];
    norm = std::sqrt(norm);
    if (norm <= 1e-12 * original_norm[j] || norm == 0.0) {
      for (std::size_t i = 0; i < rows; ++i) x[i] = 0.0;
    } else {
      for (std::size_t i = 0; i < rows; ++i) x[i] /= norm;
    }
  }
  q = qt.transpose();
}

/// Thin SVD of a small dense matrix B (l x c) by one-sided Jacobi on Bᵀ.
/// Returns l singular triples sorted by descending singular value.
inline SvdResult thin_svd(const DenseMatrix& b) {
  const std::size_t l = b.rows();
  const std::size_t c = b.cols();
  // Row j of w is column j of W = Bᵀ; rotations act on row pairs.
  DenseMatrix w = b;
  DenseMatrix rotations = DenseMatrix::identity(l);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < l; ++i) {
      for (std::size_t j = i + 1; j < l; ++j) {
        double alpha = 0.0;
        double beta = 0.0;
        double gamma = 0.0;
        for (std::size_t r = 0; r < c; ++r) {
          alpha += w(i, r) * w(i, r);
          beta += w(j, r) * w(j, r);
          gamma += w(i, r) * w(j, r);
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t r = 0; r < c; ++r) {
          const double wi = w(i, r);
          const double wj = w(j, r);
          w(i, r) = cs * wi - sn * wj;
          w(j, r) = sn * wi + cs * wj;
        }
        for (std::size_t r = 0; r < l; ++r) {
          const double ri = rotations(r, i);
          const double rj = rotations(r, j);
          rotations(r, i) = cs * ri - sn * rj;
          rotations(r, j) = sn * ri + cs * rj;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(l, 0.0);
  for (std::size_t j = 0; j < l; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < c; ++r) s += w(j, r) * w(j, r);
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(l);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&sigma](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SvdResult out{DenseMatrix(l, l), std::vector<double>(l), DenseMatrix(c, l)};
  for (std::size_t k = 0; k < l; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j];
    for (std::size_t r = 0; r < l; ++r) out.u(r, k) = rotations(r, j);
    if (sigma[j] > 0.0) {
      for (std::size_t r = 0; r < c; ++r) out.v(r, k) = w(j, r) / sigma[j];
    }
  }
  return out;
}

namespace detail {

// a·x with x rounded to float; accumulation stays in double. Columns are
// handled in blocks of one cache line so the gathered table stays in cache.
inline DenseMatrix multiply_single(const SparseMatrix& a, const DenseMatrix& x) {
  if (a.cols() != x.rows()) fail(ErrorCode::DimensionMismatch, "inner dimensions differ");
  constexpr std::size_t kBlock = 16;
  const std::size_t width = x.cols();
  DenseMatrix out(a.rows(), width);
  std::vector<float> narrow(x.rows() * kBlock);
  for (std::size_t lo = 0; lo < width; lo += kBlock) {
    const std::size_t span = std::min(kBlock, width - lo);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t j = 0; j < span; ++j) narrow[r * kBlock + j] = static_cast<float>(x(r, lo + j));
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
      double* out_row = out.row(r).data() + lo;
      const auto cols = a.row_columns(r);
      const auto vals = a.row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        const float* x_row = narrow.data() + cols[k] * kBlock;
        const double v = vals[k];
        for (std::size_t j = 0; j < span; ++j) out_row[j] += v * static_cast<double>(x_row[j]);
      }
    }
  }
  return out;
}

}  // namespace detail

/// Rank-k truncated SVD by randomized range finding: Gaussian sketch with
/// 10 extra columns, 4 power iterations with re-orthonormalization, then an
/// exact SVD of the projected matrix.
inline SvdResult randomized_svd(const SparseMatrix& a, std::size_t k, RandomSource rng) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  const std::size_t max_rank = std::min(rows, cols);
  if (k < 1 || k > max_rank) {
    fail(ErrorCode::RankTooLarge, "rank too large: requested " + std::to_string(k) +
                                      " but the matrix is " + std::to_string(rows) + "x" +
                                      std::to_string(cols));
  }
  constexpr std::size_t kOversampling = 10;
  constexpr int kPowerIterations = 4;
  const std::size_t sketch = std::min(k + kOversampling, max_rank);

  DenseMatrix omega(cols, sketch);
  for (double& x : omega.values()) x = rng.normal();

  // Power iterations only shape the subspace, so their gathers read a
  // single-precision copy of the sketch (half the cache footprint). The
  // projection below is done in full precision.
  const SparseMatrix at = a.transpose();
  DenseMatrix q = detail::multiply_single(a, omega);
  orthonormalize_columns(q);
  for (int it = 0; it < kPowerIterations; ++it) {
    DenseMatrix z = detail::multiply_single(at, q);
    orthonormalize_columns(z);
    q = detail::multiply_single(a, z);
    orthonormalize_columns(q);
  }

  // B = Qᵀ A, held as its transpose Aᵀ Q (cols x sketch).
  const DenseMatrix bt = multiply_transposed(a, q);
  const SvdResult small = thin_svd(bt.transpose());

  SvdResult out{DenseMatrix(rows, k), std::vector<double>(k), DenseMatrix(cols, k)};
  const DenseMatrix u_full = multiply(q, small.u);
  for (std::size_t j = 0; j < k; ++j) {
    out.singular_values[j] = small.singular_values[j];
    for (std::size_t r = 0; r < rows; ++r) out.u(r, j) = u_full(r, j);
    for (std::size_t r = 0; r < cols; ++r) out.v(r, j) = small.v(r, j);
  }
  return out;
}

inline SvdResult randomized_svd(const DenseMatrix& a, std::size_t k, RandomSource rng) {
  return randomized_svd(SparseMatrix::from_dense(a), k, rng);
}

}  // namespace graphmine
