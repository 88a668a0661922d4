// Small hand-computable families shared across the test suite.
#pragma once

#include "framekit/framekit.hpp"

namespace fixtures {

using framekit::FusionFrame;
using framekit::Index;
using framekit::Mat;
using framekit::Subspace;
using framekit::Vec;

/// {span e1, span e2} in R^2 with unit weights: a Parseval fusion frame.
inline FusionFrame<double> parseval_pair() {
  Mat<double> e1(2, 1), e2(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  return FusionFrame<double>({Subspace<double>(e1), Subspace<double>(e2)}, {1.0, 1.0});
}

/// {span e1, span e2, span (1,1)/sqrt(2)} in R^2 with unit weights.
/// Frame operator [[1.5, 0.5], [0.5, 1.5]], bounds (1, 2).
inline FusionFrame<double> three_subspace_r2() {
  Mat<double> e1(2, 1), e2(2, 1), diag(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return FusionFrame<double>({Subspace<double>(e1), Subspace<double>(e2), Subspace<double>(diag)},
                             {1.0, 1.0, 1.0});
}

/// A single proper subspace: upper bound only, no spanning.
inline FusionFrame<double> bessel_only() {
  Mat<double> basis = Mat<double>::Identity(4, 2);
  return FusionFrame<double>({Subspace<double>(basis)}, {1.0});
}

}  // namespace fixtures
