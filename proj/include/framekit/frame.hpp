#pragma once

#include <limits>
#include <utility>

#include "framekit/linalg.hpp"

namespace framekit {

/// A finite family of vectors {f_i} in C^n, stored as the columns of the
/// synthesis matrix. Spanning is not an invariant; frame_bounds() decides it.
template <ScalarType S>
class Frame {
 public:
  explicit Frame(Mat<S> vectors) : vectors_(std::move(vectors)) {
    require(vectors_.cols() >= 1, Errc::shape_mismatch, "a frame needs at least one vector");
    require(vectors_.rows() >= 1, Errc::shape_mismatch, "ambient dimension must be positive");
    require(vectors_.allFinite(), Errc::shape_mismatch, "frame vectors have non-finite entries");
  }

  Index ambient_dim() const { return vectors_.rows(); }
  Index size() const { return vectors_.cols(); }
  const Mat<S>& vectors() const { return vectors_; }
  Vec<S> vector(Index i) const { return vectors_.col(i); }

  /// Synthesis operator as a matrix: c |-> sum_i c_i f_i.
  const Mat<S>& synthesis() const { return vectors_; }
  /// Analysis operator as a matrix: f |-> {<f, f_i>}.
  Mat<S> analysis() const { return vectors_.adjoint(); }

 private:
  Mat<S> vectors_;
};

struct FrameBounds {
  double alpha = 0.0;
  double beta = 0.0;
  bool is_frame = false;
  bool is_basis = false;
};

/// Optimal frame bounds (extreme eigenvalues of S = T T*). beta is always a
/// valid Bessel bound; is_frame additionally requires the lower bound to
/// clear a scale-free threshold.
template <ScalarType S>
FrameBounds frame_bounds(const Frame<S>& frame, const Tol& tol = {}) {
  Mat<S> frame_op = frame.synthesis() * frame.analysis();
  SpectralBounds bounds = spectral_bounds(frame_op, tol);
  FrameBounds result;
  result.alpha = bounds.lambda_min;
  result.beta = bounds.lambda_max;
  const double threshold = static_cast<double>(frame.ambient_dim()) *
                           std::numeric_limits<double>::epsilon() * result.beta;
  result.is_frame = result.alpha > threshold;
  result.is_basis = result.is_frame && frame.size() == frame.ambient_dim();
  return result;
}

/// Canonical dual {S^-1 f_i}.
template <ScalarType S>
Frame<S> canonical_dual_frame(const Frame<S>& frame, const Tol& tol = {}) {
  FrameBounds bounds = frame_bounds(frame, tol);
  require(bounds.is_frame, Errc::not_a_frame, "lower frame bound is numerically zero");
  Mat<S> frame_op = frame.synthesis() * frame.analysis();
  Mat<S> dual_vectors = Eigen::LDLT<Mat<S>>(frame_op).solve(frame.vectors());
  return Frame<S>(std::move(dual_vectors));
}

/// True iff the reconstruction f = sum_i <f, f_i> g_i holds, i.e.
/// ||U T* - I|| <= tol.identity with T from `frame` and U from `dual`.
template <ScalarType S>
ResidualCheck is_dual_pair(const Frame<S>& frame, const Frame<S>& dual, const Tol& tol = {}) {
  require(frame.ambient_dim() == dual.ambient_dim(), Errc::shape_mismatch,
          "dual pair must share the ambient dimension");
  require(frame.size() == dual.size(), Errc::shape_mismatch,
          "dual pair must have the same number of vectors");
  const double residual = identity_residual(dual.synthesis() * frame.analysis());
  return {residual <= tol.identity, residual};
}

}  // namespace framekit
