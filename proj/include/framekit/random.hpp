#pragma once

#include <cstdint>
#include <random>

#include "framekit/linalg.hpp"

namespace framekit::rng {

using Engine = std::mt19937_64;

template <ScalarType S>
S gaussian(Engine& engine) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if constexpr (std::same_as<S, double>) {
    return normal(engine);
  } else {
    return Cplx(normal(engine), normal(engine));
  }
}

template <ScalarType S>
Mat<S> gaussian_matrix(Index rows, Index cols, Engine& engine) {
  Mat<S> m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = gaussian<S>(engine);
  return m;
}

template <ScalarType S>
Vec<S> gaussian_vector(Index n, Engine& engine) {
  Vec<S> v(n);
  for (Index i = 0; i < n; ++i) v(i) = gaussian<S>(engine);
  return v;
}

template <ScalarType S>
Vec<S> unit_vector(Index n, Engine& engine) {
  Vec<S> v = gaussian_vector<S>(n, engine);
  double norm = v.norm();
  while (norm < 1e-12) {
    v = gaussian_vector<S>(n, engine);
    norm = v.norm();
  }
  return v / norm;
}

/// Haar-distributed orthonormal columns: QR of a Gaussian matrix with the
/// sign ambiguity fixed from the diagonal of R.
template <ScalarType S>
Mat<S> haar_orthonormal(Index n, Index d, Engine& engine) {
  Mat<S> g = gaussian_matrix<S>(n, d, engine);
  Eigen::HouseholderQR<Mat<S>> qr(g);
  Mat<S> q = qr.householderQ() * Mat<S>::Identity(n, d);
  Mat<S> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    S diag = r(j, j);
    double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / S(mag);
  }
  return q;
}

}  // namespace framekit::rng
