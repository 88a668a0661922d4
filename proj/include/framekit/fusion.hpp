#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "framekit/linalg.hpp"
#include "framekit/random.hpp"

namespace framekit {

/// A weighted family of subspaces {(W_i, w_i)} of a common ambient space.
/// Weights are strictly positive; whether the family actually is a fusion
/// frame is decided by validate().
template <ScalarType S>
class FusionFrame {
 public:
  FusionFrame(std::vector<Subspace<S>> subspaces, std::vector<double> weights)
      : subspaces_(std::move(subspaces)), weights_(std::move(weights)) {
    require(!subspaces_.empty(), Errc::shape_mismatch, "need at least one subspace");
    require(subspaces_.size() == weights_.size(), Errc::shape_mismatch,
            "one weight per subspace required");
    const Index n = subspaces_.front().ambient_dim();
    for (const auto& subspace : subspaces_) {
      require(subspace.ambient_dim() == n, Errc::shape_mismatch,
              "subspaces must share the ambient dimension");
    }
    for (double w : weights_) {
      require(std::isfinite(w) && w > 0.0, Errc::weight_error, "weights must be positive");
    }
    offsets_.resize(subspaces_.size() + 1, 0);
    for (std::size_t i = 0; i < subspaces_.size(); ++i) {
      offsets_[i + 1] = offsets_[i] + subspaces_[i].dim();
    }
  }

  Index ambient_dim() const { return subspaces_.front().ambient_dim(); }
  Index size() const { return static_cast<Index>(subspaces_.size()); }
  const Subspace<S>& subspace(Index i) const { return subspaces_[static_cast<std::size_t>(i)]; }
  double weight(Index i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const { return weights_; }

  Index block_dim(Index i) const { return subspaces_[static_cast<std::size_t>(i)].dim(); }
  Index block_offset(Index i) const { return offsets_[static_cast<std::size_t>(i)]; }
  Index total_block_dim() const { return offsets_.back(); }

  std::vector<Index> block_dims() const {
    std::vector<Index> dims(subspaces_.size());
    for (std::size_t i = 0; i < subspaces_.size(); ++i) dims[i] = subspaces_[i].dim();
    return dims;
  }

 private:
  std::vector<Subspace<S>> subspaces_;
  std::vector<double> weights_;
  std::vector<Index> offsets_;
};

/// Element of the direct sum of the subspaces, in per-subspace local
/// coordinates (block i has length dim W_i).
template <ScalarType S>
struct BlockVec {
  std::vector<Vec<S>> blocks;

  Index size() const { return static_cast<Index>(blocks.size()); }

  Vec<S> stacked() const {
    Index total = 0;
    for (const auto& b : blocks) total += b.size();
    Vec<S> out(total);
    Index at = 0;
    for (const auto& b : blocks) {
      out.segment(at, b.size()) = b;
      at += b.size();
    }
    return out;
  }

  static BlockVec from_stacked(const std::vector<Index>& layout, const Vec<S>& stacked) {
    const Index total = std::accumulate(layout.begin(), layout.end(), Index(0));
    require(stacked.size() == total, Errc::layout_mismatch,
            "stacked vector does not match the block layout");
    BlockVec out;
    out.blocks.reserve(layout.size());
    Index at = 0;
    for (Index d : layout) {
      out.blocks.push_back(stacked.segment(at, d));
      at += d;
    }
    return out;
  }

  double norm() const { return stacked().norm(); }
};

/// Operator between two direct-sum spaces, stored densely with block-index
/// metadata (rows follow the codomain layout, columns the domain layout).
template <ScalarType S>
class BlockOp {
 public:
  BlockOp(std::vector<Index> domain_layout, std::vector<Index> codomain_layout, Mat<S> matrix)
      : domain_layout_(std::move(domain_layout)),
        codomain_layout_(std::move(codomain_layout)),
        matrix_(std::move(matrix)) {
    domain_offsets_ = offsets_of(domain_layout_);
    codomain_offsets_ = offsets_of(codomain_layout_);
    require(matrix_.rows() == codomain_offsets_.back() && matrix_.cols() == domain_offsets_.back(),
            Errc::layout_mismatch, "matrix shape does not match the block layouts");
    require(matrix_.allFinite(), Errc::shape_mismatch, "block operator has non-finite entries");
  }

  static BlockOp identity(const std::vector<Index>& layout) {
    const Index total = std::accumulate(layout.begin(), layout.end(), Index(0));
    return BlockOp(layout, layout, Mat<S>::Identity(total, total));
  }

  static BlockOp block_diagonal(const std::vector<Index>& domain_layout,
                                const std::vector<Index>& codomain_layout,
                                const std::vector<Mat<S>>& blocks) {
    require(blocks.size() == domain_layout.size() && blocks.size() == codomain_layout.size(),
            Errc::layout_mismatch, "one diagonal block per layout entry required");
    const Index rows = std::accumulate(codomain_layout.begin(), codomain_layout.end(), Index(0));
    const Index cols = std::accumulate(domain_layout.begin(), domain_layout.end(), Index(0));
    Mat<S> m = Mat<S>::Zero(rows, cols);
    Index r = 0, c = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      require(blocks[i].rows() == codomain_layout[i] && blocks[i].cols() == domain_layout[i],
              Errc::layout_mismatch, "diagonal block shape does not match its layout entry");
      m.block(r, c, codomain_layout[i], domain_layout[i]) = blocks[i];
      r += codomain_layout[i];
      c += domain_layout[i];
    }
    return BlockOp(domain_layout, codomain_layout, std::move(m));
  }

  const std::vector<Index>& domain_layout() const { return domain_layout_; }
  const std::vector<Index>& codomain_layout() const { return codomain_layout_; }
  const Mat<S>& matrix() const { return matrix_; }

  Index domain_blocks() const { return static_cast<Index>(domain_layout_.size()); }
  Index codomain_blocks() const { return static_cast<Index>(codomain_layout_.size()); }

  auto block(Index i, Index j) const {
    return matrix_.block(codomain_offsets_[static_cast<std::size_t>(i)],
                         domain_offsets_[static_cast<std::size_t>(j)],
                         codomain_layout_[static_cast<std::size_t>(i)],
                         domain_layout_[static_cast<std::size_t>(j)]);
  }

  BlockVec<S> apply(const BlockVec<S>& input) const {
    Vec<S> stacked = matrix_ * input.stacked();
    return BlockVec<S>::from_stacked(codomain_layout_, stacked);
  }

  BlockOp adjoint() const { return BlockOp(codomain_layout_, domain_layout_, matrix_.adjoint()); }

 private:
  static std::vector<Index> offsets_of(const std::vector<Index>& layout) {
    std::vector<Index> offsets(layout.size() + 1, 0);
    for (std::size_t i = 0; i < layout.size(); ++i) offsets[i + 1] = offsets[i] + layout[i];
    return offsets;
  }

  std::vector<Index> domain_layout_;
  std::vector<Index> codomain_layout_;
  Mat<S> matrix_;
  std::vector<Index> domain_offsets_;
  std::vector<Index> codomain_offsets_;
};

struct FusionReport {
  double alpha = 0.0;
  double beta = 0.0;
  bool is_fusion_frame = false;
  bool is_tight = false;
  bool is_parseval = false;
  bool is_uniform = false;
};

/// Synthesis operator as an ambient_dim x (sum of block dims) matrix; the
/// i-th block of columns is w_i times the stored basis of W_i.
template <ScalarType S>
Mat<S> synthesis_matrix(const FusionFrame<S>& ff) {
  Mat<S> t(ff.ambient_dim(), ff.total_block_dim());
  for (Index i = 0; i < ff.size(); ++i) {
    t.middleCols(ff.block_offset(i), ff.block_dim(i)) = ff.weight(i) * ff.subspace(i).basis();
  }
  return t;
}

template <ScalarType S>
Mat<S> analysis_matrix(const FusionFrame<S>& ff) {
  return synthesis_matrix(ff).adjoint();
}

/// Analysis of f: block i holds the local coordinates of w_i P_{W_i} f.
template <ScalarType S>
BlockVec<S> analysis(const FusionFrame<S>& ff, const Vec<S>& f) {
  require(f.size() == ff.ambient_dim(), Errc::shape_mismatch,
          "vector length does not match the ambient dimension");
  BlockVec<S> out;
  out.blocks.reserve(static_cast<std::size_t>(ff.size()));
  for (Index i = 0; i < ff.size(); ++i) {
    out.blocks.push_back(ff.weight(i) * (ff.subspace(i).basis().adjoint() * f));
  }
  return out;
}

/// Fusion frame operator S = sum_i w_i^2 P_{W_i}.
template <ScalarType S>
Mat<S> frame_operator(const FusionFrame<S>& ff) {
  Mat<S> s = Mat<S>::Zero(ff.ambient_dim(), ff.ambient_dim());
  for (Index i = 0; i < ff.size(); ++i) {
    const Mat<S>& basis = ff.subspace(i).basis();
    s += (ff.weight(i) * ff.weight(i)) * (basis * basis.adjoint());
  }
  return s;
}

/// Fusion frame bounds and the tight/Parseval/uniform classification. A
/// family with no lower bound is still reported with its Bessel bound beta.
template <ScalarType S>
FusionReport validate(const FusionFrame<S>& ff, const Tol& tol = {}) {
  SpectralBounds bounds = spectral_bounds(frame_operator(ff), tol);
  FusionReport report;
  report.alpha = bounds.lambda_min;
  report.beta = bounds.lambda_max;
  const double threshold = static_cast<double>(ff.ambient_dim()) *
                           std::numeric_limits<double>::epsilon() * report.beta;
  report.is_fusion_frame = report.alpha > threshold;
  // ||S - I|| for Hermitian S is the larger eigenvalue distance from 1.
  const double parseval_residual =
      std::max(std::abs(report.alpha - 1.0), std::abs(report.beta - 1.0));
  report.is_parseval = parseval_residual <= tol.identity;
  report.is_tight =
      (report.beta - report.alpha <= tol.identity * report.beta) || report.is_parseval;
  report.is_uniform = true;
  for (Index i = 1; i < ff.size(); ++i) {
    if (ff.weight(i) != ff.weight(0)) report.is_uniform = false;
  }
  return report;
}

template <ScalarType S>
struct FusionDual {
  FusionFrame<S> dual;
  BlockOp<S> q;
};

/// Canonical dual (S^-1 W, w) together with the block-diagonal coupling
/// operator realizing {f_i} |-> {S^-1 f_i} in local coordinates.
template <ScalarType S>
FusionDual<S> canonical_dual(const FusionFrame<S>& ff, const Tol& tol = {}) {
  FusionReport report = validate(ff, tol);
  require(report.is_fusion_frame, Errc::not_a_fusion_frame,
          "family has no positive lower fusion frame bound");
  Eigen::LDLT<Mat<S>> solver(frame_operator(ff));

  std::vector<Subspace<S>> dual_subspaces;
  std::vector<Mat<S>> q_blocks;
  dual_subspaces.reserve(static_cast<std::size_t>(ff.size()));
  q_blocks.reserve(static_cast<std::size_t>(ff.size()));
  for (Index i = 0; i < ff.size(); ++i) {
    Mat<S> mapped = solver.solve(ff.subspace(i).basis());
    Subspace<S> dual_subspace = orthonormal_basis<S>(mapped, tol);
    q_blocks.push_back(dual_subspace.basis().adjoint() * mapped);
    dual_subspaces.push_back(std::move(dual_subspace));
  }

  FusionFrame<S> dual(std::move(dual_subspaces), ff.weights());
  BlockOp<S> q = BlockOp<S>::block_diagonal(ff.block_dims(), dual.block_dims(), q_blocks);
  return {std::move(dual), std::move(q)};
}

/// The minimal-norm preimage of f under synthesis: T* S^-1 f in local
/// coordinates.
template <ScalarType S>
BlockVec<S> fusion_coefficients(const FusionFrame<S>& ff, const Vec<S>& f, const Tol& tol = {}) {
  require(f.size() == ff.ambient_dim(), Errc::shape_mismatch,
          "vector length does not match the ambient dimension");
  FusionReport report = validate(ff, tol);
  require(report.is_fusion_frame, Errc::not_a_fusion_frame,
          "family has no positive lower fusion frame bound");
  Vec<S> preconditioned = Eigen::LDLT<Mat<S>>(frame_operator(ff)).solve(f);
  return analysis(ff, preconditioned);
}

/// Samples random synthesis-kernel perturbations z and checks that the
/// fusion frame coefficients never lose to a competing preimage:
/// ||coeffs|| <= ||coeffs + z|| + tol for every trial.
template <ScalarType S>
bool verify_minimal_norm(const FusionFrame<S>& ff, const Vec<S>& f, Index trials,
                         std::uint64_t seed, const Tol& tol = {}) {
  require(trials >= 1, Errc::shape_mismatch, "need at least one trial");
  Vec<S> coeffs = fusion_coefficients(ff, f, tol).stacked();
  Mat<S> synthesis = synthesis_matrix(ff);

  Eigen::JacobiSVD<Mat<S>> svd(synthesis, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double threshold = tol.rank_threshold(sigma_max, synthesis.rows(), synthesis.cols());
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) >= threshold && sigma(rank) > 0.0) ++rank;
  const Index kernel_dim = synthesis.cols() - rank;

  rng::Engine engine(seed);
  const double scale = std::max(1.0, coeffs.norm());
  for (Index trial = 0; trial < trials; ++trial) {
    Vec<S> z = Vec<S>::Zero(synthesis.cols());
    if (kernel_dim > 0) {
      z = svd.matrixV().rightCols(kernel_dim) *
          (scale * rng::gaussian_vector<S>(kernel_dim, engine));
    }
    if (coeffs.norm() > (coeffs + z).norm() + tol.identity) return false;
  }
  return true;
}

}  // namespace framekit
