#pragma once

#include <complex>
#include <concepts>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "framekit/errors.hpp"
#include "framekit/tolerance.hpp"

namespace framekit {

using Index = Eigen::Index;
using Cplx = std::complex<double>;

template <typename T>
concept ScalarType = std::same_as<T, double> || std::same_as<T, Cplx>;

template <ScalarType S> using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <ScalarType S> using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <ScalarType S>
constexpr std::string_view field_name() {
  if constexpr (std::same_as<S, double>) {
    return "real";
  } else {
    return "complex";
  }
}

/// Spectral (largest-singular-value) norm. Empty matrices have norm zero.
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  using S = typename Derived::Scalar;
  Eigen::JacobiSVD<Mat<S>> svd(m.derived());
  return svd.singularValues()(0);
}

/// ||X - I|| in the spectral norm; X must be square.
template <typename Derived>
double identity_residual(const Eigen::MatrixBase<Derived>& x) {
  require(x.rows() == x.cols(), Errc::shape_mismatch, "identity residual needs a square matrix");
  using S = typename Derived::Scalar;
  Mat<S> d = x.derived();
  d -= Mat<S>::Identity(x.rows(), x.cols());
  return op_norm(d);
}

template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& m, const Tol& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  using S = typename Derived::Scalar;
  Eigen::JacobiSVD<Mat<S>> svd(m.derived());
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  const double threshold = tol.rank_threshold(sigma(0), m.rows(), m.cols());
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) >= threshold) ++rank;
  return rank;
}

/// A subspace of C^n (or R^n), stored as a matrix with orthonormal columns.
template <ScalarType S>
class Subspace {
 public:
  /// Wraps an already-orthonormal basis. Use orthonormal_basis() for raw
  /// spanning sets.
  explicit Subspace(Mat<S> basis, const Tol& tol = {}) : basis_(std::move(basis)) {
    require(basis_.cols() >= 1, Errc::shape_mismatch, "subspace needs at least one basis vector");
    require(basis_.cols() <= basis_.rows(), Errc::shape_mismatch,
            "subspace dimension exceeds ambient dimension");
    require(basis_.allFinite(), Errc::shape_mismatch, "subspace basis has non-finite entries");
    Mat<S> gram = basis_.adjoint() * basis_;
    require(identity_residual(gram) <= tol.identity, Errc::shape_mismatch,
            "basis columns are not orthonormal");
  }

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Mat<S>& basis() const { return basis_; }

 private:
  Mat<S> basis_;
};

/// Orthonormal basis of the column span of `vectors`; the subspace dimension
/// is the numerical rank. Input that is already orthonormal is kept as-is so
/// exact bases (e.g. standard basis vectors) survive a round trip untouched.
template <ScalarType S>
Subspace<S> orthonormal_basis(const Mat<S>& vectors, const Tol& tol = {}) {
  require(vectors.cols() >= 1, Errc::shape_mismatch, "need at least one spanning vector");
  require(vectors.allFinite(), Errc::shape_mismatch, "spanning vectors have non-finite entries");
  if (vectors.cols() <= vectors.rows()) {
    Mat<S> gram = vectors.adjoint() * vectors;
    if (identity_residual(gram) <= tol.identity) return Subspace<S>(vectors, tol);
  }
  Eigen::JacobiSVD<Mat<S>> svd(vectors, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double threshold = tol.rank_threshold(sigma_max, vectors.rows(), vectors.cols());
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) >= threshold && sigma(rank) > 0.0) ++rank;
  require(rank >= 1, Errc::zero_span, "all spanning vectors are numerically zero");
  return Subspace<S>(svd.matrixU().leftCols(rank), tol);
}

/// Orthogonal projection onto the subspace, as an ambient_dim x ambient_dim
/// matrix. Hermitian and idempotent by construction (up to roundoff).
template <ScalarType S>
Mat<S> projection_matrix(const Subspace<S>& subspace) {
  return subspace.basis() * subspace.basis().adjoint();
}

/// Basis-independent subspace equality: ||P_U - P_V|| <= tol.identity.
template <ScalarType S>
bool subspaces_equal(const Subspace<S>& u, const Subspace<S>& v, const Tol& tol = {}) {
  if (u.ambient_dim() != v.ambient_dim()) return false;
  return op_norm(projection_matrix(u) - projection_matrix(v)) <= tol.identity;
}

/// Moore-Penrose pseudo-inverse via SVD with the shared rank cutoff.
template <ScalarType S>
Mat<S> pseudo_inverse(const Mat<S>& m, const Tol& tol = {}) {
  require(m.allFinite(), Errc::shape_mismatch, "matrix has non-finite entries");
  if (m.rows() == 0 || m.cols() == 0) return Mat<S>::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Mat<S>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double threshold = tol.rank_threshold(sigma_max, m.rows(), m.cols());
  Vec<double> inverted = Vec<double>::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) >= threshold && sigma(i) > 0.0) inverted(i) = 1.0 / sigma(i);
  }
  return svd.matrixV() * inverted.asDiagonal() * svd.matrixU().adjoint();
}

struct SpectralBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Extreme eigenvalues of a Hermitian matrix.
template <ScalarType S>
SpectralBounds spectral_bounds(const Mat<S>& h, const Tol& tol = {}) {
  require(h.rows() == h.cols(), Errc::shape_mismatch, "spectral bounds need a square matrix");
  require(h.allFinite(), Errc::shape_mismatch, "matrix has non-finite entries");
  const double scale = std::max(1.0, op_norm(h));
  require(op_norm(h - h.adjoint()) <= tol.identity * scale, Errc::not_hermitian,
          "matrix is not Hermitian within tolerance");
  Mat<S> symmetrized = (h + h.adjoint()) / S(2);
  Eigen::SelfAdjointEigenSolver<Mat<S>> eig(symmetrized, Eigen::EigenvaluesOnly);
  const auto& values = eig.eigenvalues();
  return {values(0), values(values.size() - 1)};
}

/// Result of a residual-backed boolean check.
struct ResidualCheck {
  bool passed = false;
  double residual = 0.0;
};

}  // namespace framekit
