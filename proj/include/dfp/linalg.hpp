#pragma once

// Symmetric eigendecomposition with small-eigenvalue truncation, a cyclic
// Jacobi oracle, and random orthogonal matrices.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "dfp/error.hpp"
#include "dfp/random.hpp"
#include "dfp/tensor.hpp"

namespace dfp {

/// Eigenvalues below or equal to this are dropped before taking square roots
/// or inverse square roots. The threshold is absolute.
inline constexpr double kDefaultThreshold = 1e-5;

/// Truncated factor pair of a Gram matrix: G ~= E diag(D) E^T with E being
/// C x r column-orthonormal and D sorted descending.
struct EigenFactorization {
  Vector eigenvalues;
  Matrix eigenvectors;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(eigenvectors.rows()); }
  std::size_t rank() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  std::size_t truncated() const noexcept { return dim() - rank(); }

  Matrix reconstruct() const { return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose(); }
};

namespace linalg_detail {

// Orders eigenpairs by descending eigenvalue, ties kept in input order, and
// flips each eigenvector so its largest-magnitude component is positive (the
// first such component on exact ties).
inline EigenFactorization canonicalize(const Vector& values, const Matrix& vectors,
                                       const std::vector<Eigen::Index>& keep) {
  std::vector<Eigen::Index> order = keep;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
  EigenFactorization out;
  const auto r = static_cast<Eigen::Index>(order.size());
  out.eigenvalues.resize(r);
  out.eigenvectors.resize(vectors.rows(), r);
  for (Eigen::Index j = 0; j < r; ++j) {
    out.eigenvalues(j) = values(order[static_cast<std::size_t>(j)]);
    Vector v = vectors.col(order[static_cast<std::size_t>(j)]);
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
      if (std::abs(v(i)) > std::abs(v(pivot))) pivot = i;
    if (v(pivot) < 0) v = -v;
    out.eigenvectors.col(j) = v;
  }
  return out;
}

inline std::vector<Eigen::Index> all_indices(Eigen::Index n) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  return idx;
}

}  // namespace linalg_detail

/// Eigendecomposition of a symmetric PSD Gram matrix, keeping only the
/// eigenpairs whose eigenvalue is strictly greater than `threshold`.
inline EigenFactorization sym_eig(const GramMatrix& g, double threshold = kDefaultThreshold) {
  if (!(threshold >= 0.0)) throw Error(ErrorKind::usage, "truncation threshold must be >= 0");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::numerical, "symmetric eigensolver did not converge");
  const Vector& values = solver.eigenvalues();
  const double trace = g.matrix().trace();
  if (values.minCoeff() < -1e-9 * std::max(trace, 0.0) - 1e-300)
    throw Error(ErrorKind::precondition, "Gram matrix is not positive semi-definite (eigenvalue " +
                                             std::to_string(values.minCoeff()) + ")");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) > threshold) keep.push_back(i);
  if (keep.empty())
    throw Error(ErrorKind::degenerate, "every eigenvalue is at or below the truncation threshold " +
                                           std::to_string(threshold));
  return linalg_detail::canonicalize(values, solver.eigenvectors(), keep);
}

inline constexpr std::size_t kJacobiMaxDim = 64;
inline constexpr int kJacobiMaxSweeps = 100;

/// Classical cyclic Jacobi eigensolver. Slow and simple; used as an
/// independent oracle for sym_eig. Nothing is truncated.
inline EigenFactorization jacobi_eig(const GramMatrix& g) {
  const auto n = static_cast<Eigen::Index>(g.dim());
  if (g.dim() > kJacobiMaxDim)
    throw Error(ErrorKind::precondition, "Jacobi oracle is limited to dimension " +
                                             std::to_string(kJacobiMaxDim));
  Matrix a = g.matrix();
  Matrix v = Matrix::Identity(n, n);
  const double tol = 1e-12 * a.norm();

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > tol) {
    if (++sweep > kJacobiMaxSweeps)
      throw Error(ErrorKind::numerical, "Jacobi iteration exceeded " +
                                            std::to_string(kJacobiMaxSweeps) + " sweeps");
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // A <- J^T A J with the rotation acting on rows/columns p and q.
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  const Vector values = a.diagonal();
  return linalg_detail::canonicalize(values, v, linalg_detail::all_indices(n));
}

/// Square matrix Z with Z Z^T = Z^T Z = I.
class OrthogonalMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit OrthogonalMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.rows() != data_.cols())
      throw Error(ErrorKind::dimension, "orthogonal matrix must be square and non-empty");
    const auto n = data_.rows();
    const Matrix ident = Matrix::Identity(n, n);
    if ((data_ * data_.transpose() - ident).cwiseAbs().maxCoeff() > kTolerance ||
        (data_.transpose() * data_ - ident).cwiseAbs().maxCoeff() > kTolerance)
      throw Error(ErrorKind::precondition, "matrix is not orthogonal");
  }

  static OrthogonalMatrix identity(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return OrthogonalMatrix(Matrix::Identity(k, k));
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  const Matrix& matrix() const noexcept { return data_; }

 private:
  struct Trusted {};
  OrthogonalMatrix(Matrix data, Trusted) : data_(std::move(data)) {}
  friend OrthogonalMatrix orthogonal_noise(std::size_t, const NoiseSpec&);

  Matrix data_;
};

inline constexpr int kNoiseAttempts = 3;

/// The raw r x r noise matrix N for a given attempt. Attempt `a` draws from
/// the stream keyed by mix64(seed, a), filling N in row-major order.
inline Matrix sample_noise(std::size_t r, const NoiseSpec& spec, int attempt = 0) {
  spec.validate();
  CounterRng rng(mix64(spec.seed, static_cast<std::uint64_t>(attempt)));
  const auto n = static_cast<Eigen::Index>(r);
  Matrix noise(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) noise(i, j) = spec.draw(rng);
  return noise;
}

/// Left singular factor of a seeded random r x r matrix. Deterministic in
/// (r, spec). A numerically rank-deficient draw is resampled from the next
/// stream, at most kNoiseAttempts times in total.
inline OrthogonalMatrix orthogonal_noise(std::size_t r, const NoiseSpec& spec) {
  if (r < 1) throw Error(ErrorKind::usage, "noise rank must be >= 1");
  for (int attempt = 0; attempt < kNoiseAttempts; ++attempt) {
    const Matrix noise = sample_noise(r, spec, attempt);
    Eigen::BDCSVD<Matrix> svd(noise, Eigen::ComputeFullU);
    const Vector& sv = svd.singularValues();
    const double cutoff = static_cast<double>(r) * std::numeric_limits<double>::epsilon() * sv(0);
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) <= cutoff) continue;
    // U of an SVD is orthogonal to working precision; skip the O(r^3) recheck.
    return OrthogonalMatrix(svd.matrixU(), OrthogonalMatrix::Trusted{});
  }
  throw Error(ErrorKind::numerical, "noise matrix stayed rank-deficient after " +
                                        std::to_string(kNoiseAttempts) + " draws");
}

}  // namespace dfp
