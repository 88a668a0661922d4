#pragma once

#include <utility>
#include <vector>

#include "framekit/duality.hpp"
#include "framekit/frame.hpp"
#include "framekit/fusion.hpp"

namespace framekit {

/// A fusion frame together with one local frame per subspace. Local frame
/// vectors live in ambient coordinates and must lie in (and span) their
/// subspace; the recorded per-subspace bounds are the frame bounds of each
/// local family inside its subspace.
template <ScalarType S>
class LocalFrameSystem {
 public:
  LocalFrameSystem(FusionFrame<S> fusion, std::vector<Frame<S>> local_frames, const Tol& tol = {})
      : fusion_(std::move(fusion)), local_frames_(std::move(local_frames)) {
    require(local_frames_.size() == static_cast<std::size_t>(fusion_.size()), Errc::index_mismatch,
            "one local frame per subspace required");
    alpha_.reserve(local_frames_.size());
    beta_.reserve(local_frames_.size());
    for (Index i = 0; i < fusion_.size(); ++i) {
      const Frame<S>& local = local_frames_[static_cast<std::size_t>(i)];
      require(local.ambient_dim() == fusion_.ambient_dim(), Errc::shape_mismatch,
              "local frame vectors must use ambient coordinates");
      const Mat<S>& basis = fusion_.subspace(i).basis();
      Mat<S> outside = local.vectors() - basis * (basis.adjoint() * local.vectors());
      for (Index l = 0; l < local.size(); ++l) {
        const double drift = outside.col(l).norm();
        const double scale = std::max(1.0, local.vector(l).norm());
        require(drift <= tol.identity * scale, Errc::not_in_subspace,
                "local frame vector leaves its subspace");
      }
      // Frame bounds of the local family as a frame for W_i, computed in
      // local coordinates.
      Frame<S> in_local_coords(basis.adjoint() * local.vectors());
      FrameBounds bounds = frame_bounds(in_local_coords, tol);
      require(bounds.is_frame, Errc::not_a_frame, "local family does not span its subspace");
      alpha_.push_back(bounds.alpha);
      beta_.push_back(bounds.beta);
    }
    alpha_inf_ = *std::min_element(alpha_.begin(), alpha_.end());
    beta_sup_ = *std::max_element(beta_.begin(), beta_.end());
  }

  const FusionFrame<S>& fusion() const { return fusion_; }
  Index size() const { return fusion_.size(); }
  const Frame<S>& local_frame(Index i) const { return local_frames_[static_cast<std::size_t>(i)]; }
  double alpha(Index i) const { return alpha_[static_cast<std::size_t>(i)]; }
  double beta(Index i) const { return beta_[static_cast<std::size_t>(i)]; }
  double alpha_inf() const { return alpha_inf_; }
  double beta_sup() const { return beta_sup_; }

 private:
  FusionFrame<S> fusion_;
  std::vector<Frame<S>> local_frames_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
  double alpha_inf_ = 0.0;
  double beta_sup_ = 0.0;
};

/// Coupling operator assembled from paired local frames: block i realizes
/// h |-> sum_l <h, f_i^l> g_i^l in local coordinates, where {f_i^l} is the
/// analysis-side local frame and {g_i^l} the synthesis-side one.
template <ScalarType S>
BlockOp<S> q_from_local_frames(const LocalFrameSystem<S>& analysis_side,
                               const LocalFrameSystem<S>& synthesis_side) {
  require(analysis_side.size() == synthesis_side.size(), Errc::index_mismatch,
          "systems must have the same number of subspaces");
  require(analysis_side.fusion().ambient_dim() == synthesis_side.fusion().ambient_dim(),
          Errc::shape_mismatch, "systems must share the ambient dimension");
  std::vector<Mat<S>> blocks;
  blocks.reserve(static_cast<std::size_t>(analysis_side.size()));
  for (Index i = 0; i < analysis_side.size(); ++i) {
    const Frame<S>& f = analysis_side.local_frame(i);
    const Frame<S>& g = synthesis_side.local_frame(i);
    require(f.size() == g.size(), Errc::index_mismatch,
            "local frames must pair vectors one-to-one per subspace");
    const Mat<S>& w_basis = analysis_side.fusion().subspace(i).basis();
    const Mat<S>& v_basis = synthesis_side.fusion().subspace(i).basis();
    blocks.push_back(v_basis.adjoint() * g.vectors() * f.vectors().adjoint() * w_basis);
  }
  return BlockOp<S>::block_diagonal(analysis_side.fusion().block_dims(),
                                    synthesis_side.fusion().block_dims(), blocks);
}

/// The concatenated weighted family {w_i f_i^l} as one ambient frame, with a
/// column-to-(subspace, local index) map for traceability.
template <ScalarType S>
struct GlobalFamily {
  Frame<S> frame;
  std::vector<std::pair<Index, Index>> column_source;  // column -> (i, l)
};

template <ScalarType S>
GlobalFamily<S> global_weighted_family(const LocalFrameSystem<S>& system) {
  Index total = 0;
  for (Index i = 0; i < system.size(); ++i) total += system.local_frame(i).size();
  Mat<S> vectors(system.fusion().ambient_dim(), total);
  std::vector<std::pair<Index, Index>> source;
  source.reserve(static_cast<std::size_t>(total));
  Index at = 0;
  for (Index i = 0; i < system.size(); ++i) {
    const Frame<S>& local = system.local_frame(i);
    vectors.middleCols(at, local.size()) = system.fusion().weight(i) * local.vectors();
    for (Index l = 0; l < local.size(); ++l) source.emplace_back(i, l);
    at += local.size();
  }
  return {Frame<S>(std::move(vectors)), std::move(source)};
}

struct LocalDualityReport {
  ResidualCheck global_dual;  // weighted global families form a dual pair
  ResidualCheck q_dual;       // lifted coupling operator passes verify_q_dual
  bool agree = false;
};

/// Evaluates both sides of the local-to-global duality equivalence
/// independently; they must agree, and a disagreement beyond tolerance is a
/// defect rather than a valid state.
template <ScalarType S>
LocalDualityReport local_duality_check(const LocalFrameSystem<S>& analysis_side,
                                       const LocalFrameSystem<S>& synthesis_side,
                                       const Tol& tol = {}) {
  GlobalFamily<S> global_w = global_weighted_family(analysis_side);
  GlobalFamily<S> global_v = global_weighted_family(synthesis_side);
  LocalDualityReport report;
  report.global_dual = is_dual_pair(global_w.frame, global_v.frame, tol);
  BlockOp<S> q = q_from_local_frames(analysis_side, synthesis_side);
  report.q_dual = verify_q_dual(analysis_side.fusion(), synthesis_side.fusion(), q, tol);
  report.agree = report.global_dual.passed == report.q_dual.passed;
  return report;
}

}  // namespace framekit
