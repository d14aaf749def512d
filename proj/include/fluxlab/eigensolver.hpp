#pragma once

#include "fluxlab/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <type_traits>

namespace fluxlab {

struct SolverOptions {
  /// Residual target relative to the Gershgorin norm bound of H.
  double tol = 1e-11;
  std::uint64_t seed = 0x5EED;
  /// Block width; 0 selects m + 2.
  int block_size = 0;
  /// Krylov blocks per restart cycle.
  int krylov_blocks = 8;
  int max_restarts = 60;
  /// Added on top of the Gershgorin lower bound to make H + c I definite.
  double shift_margin = 1.0;
};

template <typename Scalar>
struct EigenResult {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;
  Eigen::VectorXd residuals;
  double norm_estimate = 0.0;
  int restarts = 0;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, Eigen::VectorXd best_residuals)
      : Error(ErrorCode::NoConvergence, what), best_residuals_(std::move(best_residuals)) {}
  const Eigen::VectorXd& best_residuals() const { return best_residuals_; }

 private:
  Eigen::VectorXd best_residuals_;
};

/// Upper bound on ||H||_2 from the largest absolute row sum.
template <typename Scalar>
double gershgorin_norm(const Eigen::SparseMatrix<Scalar>& H) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(H.rows());
  for (int k = 0; k < H.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(H, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

/// Lower bound on the spectrum: min_i (Re H_ii - sum_{j != i} |H_ij|).
template <typename Scalar>
double gershgorin_lower(const Eigen::SparseMatrix<Scalar>& H) {
  Eigen::VectorXd lower = Eigen::VectorXd::Zero(H.rows());
  for (int k = 0; k < H.outerSize(); ++k)
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(H, k); it; ++it)
      lower[it.row()] += it.row() == it.col() ? std::real(it.value()) : -std::abs(it.value());
  return lower.size() ? lower.minCoeff() : 0.0;
}

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> random_block(Eigen::Index n, Eigen::Index b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> X(n, b);
  for (Eigen::Index c = 0; c < b; ++c)
    for (Eigen::Index r = 0; r < n; ++r) {
      if constexpr (std::is_same_v<Scalar, std::complex<double>>)
        X(r, c) = Scalar(normal(rng), normal(rng));
      else
        X(r, c) = normal(rng);
    }
  return X;
}

// Appends the columns of W to the orthonormal basis Q[:, :k] after two rounds
// of block Gram-Schmidt; columns that lose all but 1e-10 of their norm are
// dropped. Returns the new column count.
template <typename Scalar>
Eigen::Index append_orthonormal(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& Q, Eigen::Index k,
                                Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> W) {
  for (Eigen::Index c = 0; c < W.cols() && k < Q.cols(); ++c) {
    auto w = W.col(c);
    const double before = w.norm();
    if (before == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      if (k > 0) w -= Q.leftCols(k) * (Q.leftCols(k).adjoint() * w);
    }
    const double after = w.norm();
    if (after <= 1e-10 * before) continue;
    Q.col(k++) = w / after;
  }
  return k;
}

}  // namespace detail

/// The m lowest eigenpairs of a sparse Hermitian matrix.
///
/// Block Krylov subspaces of (H + c I)^{-1}, with c from the Gershgorin lower
/// bound, are built with full reorthogonalization and restarted from the
/// lowest Ritz vectors. Ritz values come from projecting H itself, so they
/// converge quadratically in the residual. Degenerate eigenvalues are resolved
/// as long as the block is wider than the multiplicity.
template <typename Scalar>
EigenResult<Scalar> lowest_eigenpairs(const Eigen::SparseMatrix<Scalar>& H, int m, const SolverOptions& opt = {}) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Sparse = Eigen::SparseMatrix<Scalar>;
  const Eigen::Index n = H.rows();
  if (H.cols() != n) throw Error(ErrorCode::InvalidArgument, "matrix is not square");
  if (m < 1 || m >= n)
    throw Error(ErrorCode::InvalidArgument,
                "requested " + std::to_string(m) + " eigenpairs of a dimension-" + std::to_string(n) + " matrix");
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

  const double norm = gershgorin_norm(H);
  const double shift = std::max(0.0, -gershgorin_lower(H)) + opt.shift_margin;
  Sparse shifted = H;
  {
    Sparse id(n, n);
    id.setIdentity();
    shifted += shift * id;
  }
  Eigen::SimplicialLDLT<Sparse, Eigen::Lower> factor(shifted);
  if (factor.info() != Eigen::Success)
    throw Error(ErrorCode::NoConvergence, "factorization of the shifted matrix failed");

  const Eigen::Index b =
      std::min<Eigen::Index>(n, std::max<Eigen::Index>(m, opt.block_size > 0 ? opt.block_size : m + 2));
  const Eigen::Index cap = std::min<Eigen::Index>(n, std::max<Eigen::Index>(b * opt.krylov_blocks, 2 * b));
  const double target = opt.tol * norm;

  Matrix X = detail::random_block<Scalar>(n, b, opt.seed);
  Eigen::VectorXd best_residuals = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  EigenResult<Scalar> result;
  result.norm_estimate = norm;

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    Matrix Q(n, cap);
    Eigen::Index k = detail::append_orthonormal<Scalar>(Q, 0, X);
    Eigen::Index block_start = 0;
    while (k < cap) {
      Matrix W = factor.solve(Q.middleCols(block_start, k - block_start));
      block_start = k;
      Eigen::Index grown = detail::append_orthonormal<Scalar>(Q, k, std::move(W));
      if (grown == k) break;  // invariant subspace
      k = grown;
    }
    if (k < m) throw Error(ErrorCode::NoConvergence, "Krylov basis collapsed below the requested count");
    auto basis = Q.leftCols(k);
    Matrix HQ = H * basis;
    Matrix projected = basis.adjoint() * HQ;
    projected = (0.5 * (projected + projected.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> ritz(projected);
    const Eigen::Index keep = std::min<Eigen::Index>(b, k);
    Matrix Y = basis * ritz.eigenvectors().leftCols(keep);
    Matrix HY = HQ * ritz.eigenvectors().leftCols(keep);
    Eigen::VectorXd values = ritz.eigenvalues().head(keep);
    Eigen::VectorXd residuals(m);
    for (int i = 0; i < m; ++i) residuals[i] = (HY.col(i) - values[i] * Y.col(i)).norm();
    if (residuals.maxCoeff() < best_residuals.maxCoeff()) best_residuals = residuals;

    if (residuals.maxCoeff() <= target || k == n) {
      result.eigenvalues = values.head(m);
      result.eigenvectors = Y.leftCols(m);
      result.residuals = residuals;
      result.restarts = restart;
      return result;
    }
    X = std::move(Y);
  }
  throw NoConvergence("no convergence after " + std::to_string(opt.max_restarts) + " restarts (best residual " +
                          std::to_string(best_residuals.maxCoeff()) + ", target " + std::to_string(target) + ")",
                      best_residuals);
}

/// Size of the leading cluster {l_i : l_i - l_1 <= cluster_tol (1 + |l_1|)}.
int multiplicity_estimate(std::span<const double> eigenvalues, double cluster_tol);

inline int multiplicity_estimate(const Eigen::VectorXd& eigenvalues, double cluster_tol) {
  return multiplicity_estimate(std::span<const double>(eigenvalues.data(), eigenvalues.size()), cluster_tol);
}

}  // namespace fluxlab
