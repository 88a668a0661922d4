// Test-only oracles, kept independent of the library's SVD-based code paths.
#pragma once

#include <vector>

#include "framekit/framekit.hpp"

namespace oracle {

using framekit::Cplx;
using framekit::Index;
using framekit::Mat;
using framekit::Vec;

/// Projector onto the column span of a full-column-rank matrix, via the
/// normal equations: P = A (A* A)^-1 A*.
template <framekit::ScalarType S>
Mat<S> gram_projector(const Mat<S>& a) {
  Mat<S> gram = a.adjoint() * a;
  return a * gram.inverse() * a.adjoint();
}

/// Singular values through the Gram route: sqrt of the eigenvalues of A* A.
template <framekit::ScalarType S>
Vec<double> singular_values_via_gram(const Mat<S>& a) {
  Mat<S> gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Mat<S>> eig(gram, Eigen::EigenvaluesOnly);
  Vec<double> sigma(eig.eigenvalues().size());
  for (Index i = 0; i < sigma.size(); ++i) {
    const double lambda = std::max(0.0, eig.eigenvalues()(sigma.size() - 1 - i));
    sigma(i) = std::sqrt(lambda);
  }
  return sigma;  // descending
}

/// Frame operator by direct summation of rank-one terms.
template <framekit::ScalarType S>
Mat<S> summed_frame_operator(const framekit::Frame<S>& frame) {
  const Index n = frame.ambient_dim();
  Mat<S> s = Mat<S>::Zero(n, n);
  for (Index i = 0; i < frame.size(); ++i) {
    s += frame.vector(i) * frame.vector(i).adjoint();
  }
  return s;
}

/// How many windows cover each coordinate in a sliding-window family.
inline std::vector<int> window_coverage(Index n, Index window, bool cyclic) {
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  for (Index j = 0; j < n; ++j) {
    for (Index t = 0; t < window; ++t) {
      Index idx = j - t;
      if (cyclic) {
        idx = ((idx % n) + n) % n;
      } else if (idx < 0) {
        continue;
      }
      counts[static_cast<std::size_t>(idx)] += 1;
    }
  }
  return counts;
}

/// Eigenvalues of the symmetric 2x2 matrix [[a, b], [b, c]] from the
/// characteristic polynomial.
inline std::pair<double, double> sym2x2_eigenvalues(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double disc = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {mean - disc, mean + disc};
}

/// Random matrix with a prescribed rank profile.
template <framekit::ScalarType S>
Mat<S> random_matrix_with_rank(Index rows, Index cols, Index rank, framekit::rng::Engine& engine) {
  if (rank == 0) return Mat<S>::Zero(rows, cols);
  Mat<S> left = framekit::rng::gaussian_matrix<S>(rows, rank, engine);
  Mat<S> right = framekit::rng::gaussian_matrix<S>(rank, cols, engine);
  return left * right;
}

}  // namespace oracle
