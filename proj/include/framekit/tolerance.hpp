#pragma once

#include <algorithm>
#include <limits>

#include <Eigen/Core>

#include "framekit/errors.hpp"

namespace framekit {

/// Numerical tolerance policy shared by every operation in the library.
///
/// `identity` is the residual threshold for operator identities such as
/// reconstruction checks, measured in the spectral norm (the identity has
/// norm one, so the threshold acts as a relative one). `rank_factor` scales
/// the rank-revealing cutoff: a singular value counts toward the rank when
/// sigma >= rank_factor * sigma_max * max(rows, cols). `psd` bounds how far
/// below zero an eigenvalue of a nominally positive matrix may dip.
struct Tol {
  double identity = 1e-8;
  double rank_factor = std::numeric_limits<double>::epsilon();
  double psd = 1e-10;

  bool valid() const { return identity > 0.0 && rank_factor > 0.0 && psd > 0.0; }

  double rank_threshold(double sigma_max, Eigen::Index rows, Eigen::Index cols) const {
    require(valid(), Errc::shape_mismatch, "tolerances must be strictly positive");
    return rank_factor * sigma_max * static_cast<double>(std::max(rows, cols));
  }
};

}  // namespace framekit
