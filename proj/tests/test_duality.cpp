#include <catch2/catch_amalgamated.hpp>

#include "oracle_helpers.hpp"
#include "test_fixtures.hpp"

using namespace framekit;

namespace {

/// Random fusion frame sized for the equivalence-suite property tests.
FusionFrame<Cplx> random_family(Index n, rng::Engine& engine, std::uint64_t seed) {
  std::uniform_int_distribution<Index> pick_k(2, 5);
  const Index k = pick_k(engine);
  std::vector<Index> dims;
  std::uniform_int_distribution<Index> pick_d(1, std::max(Index(1), n / 2));
  Index total = 0;
  for (Index i = 0; i < k; ++i) {
    dims.push_back(pick_d(engine));
    total += dims.back();
  }
  while (total < n + 1) {  // keep the family spanning with a little slack
    dims.push_back(pick_d(engine));
    total += dims.back();
  }
  return random_fusion_frame<Cplx>(n, dims, seed);
}

}  // namespace

TEST_CASE("verify_q_dual on explicit couplings", "[duality]") {
  FusionFrame<double> pair = fixtures::parseval_pair();
  BlockOp<double> id = BlockOp<double>::identity(pair.block_dims());
  REQUIRE(verify_q_dual(pair, pair, id).passed);

  auto [dual, q] = canonical_dual(fixtures::three_subspace_r2());
  REQUIRE(verify_q_dual(fixtures::three_subspace_r2(), dual, q).passed);

  BlockOp<double> zero(pair.block_dims(), pair.block_dims(), Mat<double>::Zero(2, 2));
  ResidualCheck check = verify_q_dual(pair, pair, zero);
  REQUIRE_FALSE(check.passed);
  REQUIRE(check.residual == Catch::Approx(1.0));
}

TEST_CASE("verify_q_dual rejects mismatched layouts", "[duality]") {
  FusionFrame<double> pair = fixtures::parseval_pair();
  FusionFrame<double> three = fixtures::three_subspace_r2();
  BlockOp<double> id = BlockOp<double>::identity(pair.block_dims());
  REQUIRE_THROWS_MATCHES(verify_q_dual(three, pair, id), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::layout_mismatch;
                         }));
}

TEST_CASE("duality_equivalences agrees on canonical pairs", "[duality]") {
  FusionFrame<double> three = fixtures::three_subspace_r2();
  auto [dual, q] = canonical_dual(three);
  DualityReport report = duality_equivalences(three, dual, q);
  REQUIRE(report.is_dual);
  REQUIRE(report.flags_agree());
  REQUIRE(report.cond1.passed);
  REQUIRE(report.cond5.passed);
  REQUIRE(report.q_star_dual_of_swap);
  REQUIRE(report.w_is_fusion_frame);
  REQUIRE(report.v_is_fusion_frame);
}

TEST_CASE("duality_equivalences on the identity coupling of a Parseval family", "[duality]") {
  FusionFrame<double> pair = fixtures::parseval_pair();
  BlockOp<double> id = BlockOp<double>::identity(pair.block_dims());
  DualityReport report = duality_equivalences(pair, pair, id);
  REQUIRE(report.is_dual);
  REQUIRE(report.flags_agree());
}

TEST_CASE("a scaled identity coupling fails every condition", "[duality]") {
  FusionFrame<double> pair = fixtures::parseval_pair();
  BlockOp<double> doubled(pair.block_dims(), pair.block_dims(),
                          Mat<double>(2.0 * Mat<double>::Identity(2, 2)));
  DualityReport report = duality_equivalences(pair, pair, doubled);
  REQUIRE_FALSE(report.is_dual);
  REQUIRE(report.flags_agree());
  REQUIRE(report.cond1.residual == Catch::Approx(1.0));
  REQUIRE(report.cond5.residual == Catch::Approx(1.0).epsilon(0.05));
  REQUIRE_FALSE(report.q_star_dual_of_swap);
}

TEST_CASE("equivalence suite flags move together on random triples", "[duality]") {
  rng::Engine engine(101);
  for (int repeat = 0; repeat < 20; ++repeat) {
    std::uniform_int_distribution<Index> pick_n(3, 24);
    const Index n = pick_n(engine);
    FusionFrame<Cplx> w = random_family(n, engine, 3000 + static_cast<std::uint64_t>(repeat));
    auto [v, q] = canonical_dual(w);
    BlockOp<Cplx> coupling = q;
    const bool spoil = repeat % 2 == 1;
    if (spoil) {
      Mat<Cplx> noisy = coupling.matrix();
      noisy += 0.05 * op_norm(noisy) *
               rng::gaussian_matrix<Cplx>(noisy.rows(), noisy.cols(), engine);
      coupling = BlockOp<Cplx>(coupling.domain_layout(), coupling.codomain_layout(), noisy);
    }
    DualityReport report = duality_equivalences(w, v, coupling);
    INFO("repeat " << repeat << " residual " << report.cond1.residual);
    REQUIRE(report.flags_agree());
    REQUIRE(report.is_dual == !spoil);
    REQUIRE(report.q_star_dual_of_swap == report.cond2.passed);
  }
}

TEST_CASE("role swap matches the adjoint coupling", "[duality]") {
  rng::Engine engine(103);
  for (int repeat = 0; repeat < 10; ++repeat) {
    FusionFrame<Cplx> w = random_family(6, engine, 4000 + static_cast<std::uint64_t>(repeat));
    auto [v, q] = canonical_dual(w);
    ResidualCheck forward = verify_q_dual(w, v, q);
    ResidualCheck swapped = verify_q_dual(v, w, q.adjoint());
    REQUIRE(forward.passed == swapped.passed);
    REQUIRE(forward.residual == Catch::Approx(swapped.residual).margin(1e-12));
  }
}

TEST_CASE("mixed Gram operator is idempotent for dual pairs", "[duality]") {
  rng::Engine engine(107);
  for (int repeat = 0; repeat < 8; ++repeat) {
    FusionFrame<Cplx> w = random_family(8, engine, 5000 + static_cast<std::uint64_t>(repeat));
    auto [v, q] = canonical_dual(w);
    REQUIRE(verify_q_dual(w, v, q).passed);
    Mat<Cplx> gram = analysis_matrix(w) * synthesis_matrix(v) * q.matrix();
    REQUIRE(op_norm((gram * gram - gram).eval()) <= 1e-8);
  }
}

TEST_CASE("component preservation of explicit couplings", "[duality]") {
  FusionFrame<double> three = fixtures::three_subspace_r2();
  auto [dual, q] = canonical_dual(three);
  REQUIRE(is_component_preserving(q, three, dual));

  // Anti-diagonal block structure on a two-block layout.
  FusionFrame<double> pair = fixtures::parseval_pair();
  Mat<double> anti(2, 2);
  anti << 0, 1, 1, 0;
  BlockOp<double> swapped(pair.block_dims(), pair.block_dims(), anti);
  REQUIRE_FALSE(is_component_preserving(swapped, pair, pair));

  // Block-diagonal but with one singular diagonal block.
  FusionFrame<double> wide({Subspace<double>(Mat<double>::Identity(4, 2)),
                            Subspace<double>(Mat<double>(Mat<double>::Identity(4, 4).rightCols(2)))},
                           {1.0, 1.0});
  Mat<double> singular = Mat<double>::Identity(4, 4);
  singular(0, 0) = 0.0;
  singular(1, 1) = 0.0;
  singular(0, 1) = 1.0;  // rank-one first block
  BlockOp<double> degenerate(wide.block_dims(), wide.block_dims(), singular);
  REQUIRE_FALSE(is_component_preserving(degenerate, wide, wide));
}

TEST_CASE("parametrized left inverse at R = 0 is the canonical one", "[duality]") {
  FusionFrame<double> three = fixtures::three_subspace_r2();
  Mat<double> zero = Mat<double>::Zero(2, 3);
  LeftInverse<double> a = parametrized_left_inverse(three, zero);
  LeftInverse<double> canonical = canonical_left_inverse(three);
  REQUIRE(op_norm(a.matrix() - canonical.matrix()) <= 1e-13);
  REQUIRE(a.source() == LeftInverse<double>::Source::parametrized);
}

TEST_CASE("parametrized left inverse simplifies on Parseval families", "[duality]") {
  rng::Engine engine(109);
  FusionFrame<double> pair = fixtures::parseval_pair();
  Mat<double> r = rng::gaussian_matrix<double>(2, 2, engine);
  LeftInverse<double> a = parametrized_left_inverse(pair, r);
  Mat<double> t = synthesis_matrix(pair);
  Mat<double> expected = t + r * (Mat<double>::Identity(2, 2) - t.adjoint() * t);
  REQUIRE(op_norm(a.matrix() - expected) <= 1e-12);
}

TEST_CASE("every parametrized matrix left-inverts the analysis operator", "[duality]") {
  rng::Engine engine(113);
  FusionFrame<double> three = fixtures::three_subspace_r2();
  for (int repeat = 0; repeat < 10; ++repeat) {
    Mat<double> r = rng::gaussian_matrix<double>(2, 3, engine);
    LeftInverse<double> a = parametrized_left_inverse(three, r);
    REQUIRE(identity_residual(a.matrix() * analysis_matrix(three)) <= 1e-10);
  }
}

TEST_CASE("the parametrization reproduces any custom left inverse", "[duality]") {
  rng::Engine engine(127);
  for (int repeat = 0; repeat < 10; ++repeat) {
    FusionFrame<Cplx> w = random_family(7, engine, 6000 + static_cast<std::uint64_t>(repeat));
    Mat<Cplx> t = synthesis_matrix(w);
    Mat<Cplx> canonical = canonical_left_inverse(w).matrix();
    Mat<Cplx> projector = Mat<Cplx>::Identity(t.cols(), t.cols()) - t.adjoint() * canonical;
    Mat<Cplx> z = rng::gaussian_matrix<Cplx>(t.rows(), t.cols(), engine);
    Mat<Cplx> custom = canonical + z * projector;
    LeftInverse<Cplx> wrapped = left_inverse_from_matrix(w, custom);
    LeftInverse<Cplx> reproduced = parametrized_left_inverse(w, custom);
    REQUIRE(op_norm(reproduced.matrix() - custom) <= 1e-10);
    REQUIRE(wrapped.source() == LeftInverse<Cplx>::Source::custom);
  }
}

TEST_CASE("a matrix that is not a left inverse is rejected", "[duality]") {
  FusionFrame<double> three = fixtures::three_subspace_r2();
  Mat<double> bogus = Mat<double>::Zero(2, 3);
  REQUIRE_THROWS_MATCHES(left_inverse_from_matrix(three, bogus), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::not_a_left_inverse;
                         }));
}

TEST_CASE("dual_from_left_inverse recovers the canonical dual", "[duality]") {
  FusionFrame<double> three = fixtures::three_subspace_r2();
  LeftInverse<double> canonical = canonical_left_inverse(three);
  auto [v, q] = dual_from_left_inverse(three, canonical, three.weights());
  auto [canonical_v, canonical_q] = canonical_dual(three);
  for (Index i = 0; i < three.size(); ++i) {
    REQUIRE(subspaces_equal(v.subspace(i), canonical_v.subspace(i)));
  }
  REQUIRE(verify_q_dual(three, v, q).passed);
  REQUIRE(is_component_preserving(q, three, v));
}

TEST_CASE("the newest-coefficient left inverse dualizes a sliding window to coordinate spans",
          "[duality]") {
  const Index n = 8;
  FusionFrame<double> window = sliding_window_frame<double>(n, 3, false);
  LeftInverse<double> a = newest_coefficient_left_inverse<double>(n, 3);
  auto [v, q] = dual_from_left_inverse(window, a, std::vector<double>(n, 1.0));
  for (Index i = 0; i < n; ++i) {
    Mat<double> e = Mat<double>::Zero(n, 1);
    e(i, 0) = 1.0;
    REQUIRE(subspaces_equal(v.subspace(i), Subspace<double>(e)));
  }
  FusionReport report = validate(v);
  REQUIRE(report.is_parseval);
  REQUIRE(report.is_uniform);
  REQUIRE(verify_q_dual(window, v, q).passed);
  REQUIRE(is_component_preserving(q, window, v));
}

TEST_CASE("dual_from_left_inverse over the full random pipeline", "[duality]") {
  rng::Engine engine(131);
  FusionFrame<Cplx> w = random_fusion_frame<Cplx>(10, {3, 2, 3, 2, 2}, 77);
  Mat<Cplx> r = rng::gaussian_matrix<Cplx>(10, w.total_block_dim(), engine);
  LeftInverse<Cplx> a = parametrized_left_inverse(w, r);
  auto [v, q] = dual_from_left_inverse(w, a, std::vector<double>(5, 1.0));
  ResidualCheck check = verify_q_dual(w, v, q);
  REQUIRE(check.passed);
  REQUIRE(check.residual <= 1e-9);
  REQUIRE(is_component_preserving(q, w, v));
}

TEST_CASE("dual weights must be positive and blocks non-degenerate", "[duality]") {
  FusionFrame<double> three = fixtures::three_subspace_r2();
  LeftInverse<double> canonical = canonical_left_inverse(three);
  REQUIRE_THROWS_MATCHES(dual_from_left_inverse(three, canonical, {1.0, 1.0, 0.0}), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::weight_error;
                         }));

  // Build a left inverse whose third block action vanishes: solve for R so
  // that the parametrized A annihilates the third column of the direct sum.
  Mat<double> t = synthesis_matrix(three);
  Mat<double> canonical_matrix = canonical.matrix();
  Mat<double> residual_projector =
      Mat<double>::Identity(3, 3) - t.adjoint() * canonical_matrix;
  Vec<double> x3 = residual_projector.col(2);
  REQUIRE(x3.norm() > 1e-8);
  Mat<double> r = -(canonical_matrix.col(2) / x3.squaredNorm()) * x3.transpose();
  LeftInverse<double> degenerate = parametrized_left_inverse(three, r);
  REQUIRE(degenerate.block(2).norm() <= 1e-12);
  REQUIRE_THROWS_MATCHES(
      dual_from_left_inverse(three, degenerate, std::vector<double>(3, 1.0)), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.code() == Errc::degenerate_block; }));
}

TEST_CASE("reverse extraction recovers the dual components", "[duality]") {
  rng::Engine engine(137);
  for (int repeat = 0; repeat < 6; ++repeat) {
    FusionFrame<Cplx> w = random_family(8, engine, 7000 + static_cast<std::uint64_t>(repeat));
    Mat<Cplx> r = rng::gaussian_matrix<Cplx>(8, w.total_block_dim(), engine);
    LeftInverse<Cplx> a = parametrized_left_inverse(w, r);
    std::vector<double> v_weights(static_cast<std::size_t>(w.size()));
    std::uniform_real_distribution<double> pick_weight(0.5, 2.0);
    for (double& weight : v_weights) weight = pick_weight(engine);
    auto [v, q] = dual_from_left_inverse(w, a, v_weights);

    Mat<Cplx> extracted = synthesis_matrix(v) * q.matrix();
    REQUIRE(op_norm(extracted - a.matrix()) <= 1e-9 * std::max(1.0, op_norm(a.matrix())));
    for (Index i = 0; i < w.size(); ++i) {
      Mat<Cplx> slice = extracted.middleCols(w.block_offset(i), w.block_dim(i));
      Subspace<Cplx> image = orthonormal_basis<Cplx>(slice);
      REQUIRE(op_norm(projection_matrix(image) - projection_matrix(v.subspace(i))) <= 1e-8);
    }
  }
}

TEST_CASE("bound diagnostics on the newest-coefficient left inverse", "[duality]") {
  const Index n = 6;
  LeftInverse<double> a = newest_coefficient_left_inverse<double>(n, 3);
  FusionFrame<double> window = sliding_window_frame<double>(n, 3, false);
  BoundDiagnostics diag = bound_diagnostics(window, a, std::vector<double>(n, 1.0));
  for (double gamma : diag.gamma) REQUIRE(gamma == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(diag.delta == Catch::Approx(1.0));
  REQUIRE(diag.q_norm_bound == Catch::Approx(op_norm(a.matrix())).margin(1e-12));
  REQUIRE(diag.q_norm_within_bound);
}

TEST_CASE("bound diagnostics on a Parseval family with unit weights", "[duality]") {
  FusionFrame<double> pair = fixtures::parseval_pair();
  LeftInverse<double> canonical = canonical_left_inverse(pair);
  BoundDiagnostics diag = bound_diagnostics(pair, canonical, {1.0, 1.0});
  REQUIRE(op_norm(canonical.matrix()) == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(diag.measured_q_norm <= 1.0 + 1e-12);
  REQUIRE(diag.q_norm_within_bound);
}

TEST_CASE("halving the dual weights doubles the coupling bound", "[duality]") {
  FusionFrame<Cplx> w = random_fusion_frame<Cplx>(6, {2, 2, 2, 2}, 91);
  LeftInverse<Cplx> a = canonical_left_inverse(w);
  BoundDiagnostics diag = bound_diagnostics(w, a, std::vector<double>(4, 0.5));
  REQUIRE(diag.q_norm_bound == Catch::Approx(2.0 * op_norm(a.matrix())).margin(1e-12));
  REQUIRE(diag.measured_q_norm <= diag.q_norm_bound * (1.0 + 1e-12));
}
