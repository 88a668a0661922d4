#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "framekit/duality.hpp"
#include "framekit/fusion.hpp"
#include "framekit/random.hpp"

namespace framekit {

/// Parameters for the fixture constructors, mirrored in JSON by the CLI.
struct GenSpec {
  enum class Kind { sliding_window, cyclic_window, random };
  Kind kind = Kind::random;
  Index dim = 0;
  Index window = 0;                     // window width for the window kinds
  Index k = 0;                          // subspace count for the random kind
  std::vector<Index> dims_per_subspace;  // optional; filled uniformly if empty
  std::uint64_t seed = 0;
  std::string field = "complex";
};

/// Sliding-window fusion frame over the standard basis: subspace j spans the
/// window of `window` consecutive basis vectors ending at e_j, clipped at the
/// left edge (truncated) or wrapped around (cyclic). All weights are one.
template <ScalarType S = double>
FusionFrame<S> sliding_window_frame(Index n, Index window, bool cyclic) {
  require(window >= 1 && window <= n, Errc::bad_window,
          "window width must satisfy 1 <= window <= dim");
  std::vector<Subspace<S>> subspaces;
  subspaces.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    if (cyclic) {
      Mat<S> basis = Mat<S>::Zero(n, window);
      for (Index t = 0; t < window; ++t) {
        const Index row = ((j - (window - 1) + t) % n + n) % n;
        basis(row, t) = S(1);
      }
      subspaces.emplace_back(std::move(basis));
    } else {
      const Index lo = std::max(Index(0), j - (window - 1));
      const Index d = j - lo + 1;
      Mat<S> basis = Mat<S>::Zero(n, d);
      for (Index t = 0; t < d; ++t) basis(lo + t, t) = S(1);
      subspaces.emplace_back(std::move(basis));
    }
  }
  return FusionFrame<S>(std::move(subspaces), std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

/// The left inverse that keeps, from each window, the newest coordinate: the
/// coefficient of e_j in block j becomes the j-th ambient coordinate. Exact
/// on the truncated sliding-window frame of the same parameters.
template <ScalarType S = double>
LeftInverse<S> newest_coefficient_left_inverse(Index n, Index window, const Tol& tol = {}) {
  require(window >= 1 && window <= n, Errc::bad_window,
          "window width must satisfy 1 <= window <= dim");
  FusionFrame<S> ff = sliding_window_frame<S>(n, window, /*cyclic=*/false);
  Mat<S> a = Mat<S>::Zero(n, ff.total_block_dim());
  for (Index j = 0; j < n; ++j) {
    // The newest basis vector e_j is the last column of block j's basis.
    a(j, ff.block_offset(j) + ff.block_dim(j) - 1) = S(1);
  }
  return left_inverse_from_matrix(ff, std::move(a), tol);
}

/// Seeded random fusion frame: Haar-like orthonormal subspace bases and
/// log-uniform weights in [0.5, 2]. When the block dimensions can span the
/// space, redraws until the synthesis operator has full row rank; when they
/// cannot, returns the (Bessel-only) family as drawn.
template <ScalarType S = Cplx>
FusionFrame<S> random_fusion_frame(Index dim, const std::vector<Index>& dims_per_subspace,
                                   std::uint64_t seed, const Tol& tol = {}) {
  require(dim >= 1, Errc::infeasible_spec, "ambient dimension must be positive");
  require(!dims_per_subspace.empty(), Errc::infeasible_spec, "need at least one subspace");
  for (Index d : dims_per_subspace) {
    require(d >= 1 && d <= dim, Errc::infeasible_spec,
            "subspace dimensions must lie in [1, dim]");
  }
  const Index total = std::accumulate(dims_per_subspace.begin(), dims_per_subspace.end(), Index(0));
  const bool can_span = total >= dim;

  rng::Engine engine(seed);
  std::uniform_real_distribution<double> log_weight(std::log(0.5), std::log(2.0));
  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Subspace<S>> subspaces;
    subspaces.reserve(dims_per_subspace.size());
    for (Index d : dims_per_subspace) {
      subspaces.emplace_back(rng::haar_orthonormal<S>(dim, d, engine));
    }
    std::vector<double> weights(dims_per_subspace.size());
    for (double& w : weights) w = std::exp(log_weight(engine));
    FusionFrame<S> ff(std::move(subspaces), std::move(weights));
    if (!can_span) return ff;
    if (numerical_rank(synthesis_matrix(ff), tol) == dim) return ff;
  }
  fail(Errc::infeasible_spec, "could not draw a spanning family within the retry budget");
}

template <ScalarType S = Cplx>
FusionFrame<S> random_fusion_frame(const GenSpec& spec, const Tol& tol = {}) {
  require(spec.kind == GenSpec::Kind::random, Errc::infeasible_spec,
          "spec does not describe a random family");
  require(spec.k >= 1, Errc::infeasible_spec, "need at least one subspace");
  std::vector<Index> dims = spec.dims_per_subspace;
  if (dims.empty()) {
    // Uniform block dimensions sized so the family can span.
    const Index d = std::min(spec.dim, (spec.dim + spec.k - 1) / spec.k);
    dims.assign(static_cast<std::size_t>(spec.k), std::max(Index(1), d));
  }
  require(static_cast<Index>(dims.size()) == spec.k, Errc::infeasible_spec,
          "dims_per_subspace must list one dimension per subspace");
  return random_fusion_frame<S>(spec.dim, dims, spec.seed, tol);
}

template <ScalarType S>
FusionFrame<S> make_fusion_frame(const GenSpec& spec, const Tol& tol = {}) {
  switch (spec.kind) {
    case GenSpec::Kind::sliding_window:
      return sliding_window_frame<S>(spec.dim, spec.window, /*cyclic=*/false);
    case GenSpec::Kind::cyclic_window:
      return sliding_window_frame<S>(spec.dim, spec.window, /*cyclic=*/true);
    case GenSpec::Kind::random:
      return random_fusion_frame<S>(spec, tol);
  }
  fail(Errc::infeasible_spec, "unknown generator kind");
}

}  // namespace framekit
