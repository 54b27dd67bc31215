#include "doctest.h"
#include "freeprod/oracle.hpp"
#include "test_helpers.hpp"

using namespace fptest;

namespace {

CompressionIsometry two_factor_v2(const MixedPair& m, SplitMix64& rng) {
  // n = 2 pattern (0, 1): one zeta in factor 0's complement, target factor 1.
  std::vector<ZetaVector> zetas{
      ZetaVector{0, random_complement_unit(m.space->factor(0), rng)}};
  return build_isometry(m.space, zetas, 1);
}

}  // namespace

TEST_CASE("n = 1: V embeds the factor space canonically") {
  MixedPair m(3);
  CompressionIsometry V = build_isometry(m.space, {}, 1);
  const auto& g = m.space->factor(1);
  CHECK(V.matrix().cols() == g.dim());
  CHECK((V.matrix().col(0) - m.space->vacuum_vector()).norm() < 1e-14);
  for (int j = 1; j < g.dim(); ++j) {
    Vec e = Vec::Zero(g.dim());
    e[j] = 1.0;
    CHECK((V.matrix().col(j) - m.space->product_vector(Word{{1}}, {e})).norm() < 1e-14);
  }
  CHECK((V.matrix().adjoint() * V.matrix() - Mat::Identity(g.dim(), g.dim())).norm() <
        1e-13);
}

TEST_CASE("every constructed V is an isometry; basis zetas map frames to tensors") {
  MixedPair m(4);
  SplitMix64 rng(51);
  for (int t = 0; t < 10; ++t) {
    CompressionIsometry V = two_factor_v2(m, rng);
    CHECK((V.matrix().adjoint() * V.matrix() -
           Mat::Identity(V.matrix().cols(), V.matrix().cols()))
              .norm() < 1e-12);
  }

  // zetas equal to frame basis vectors send the target frame to product
  // basis vectors coordinate for coordinate.
  const auto& g0 = m.space->factor(0);
  const auto& g1 = m.space->factor(1);
  Vec e0 = Vec::Zero(g0.dim());
  e0[1] = 1.0;
  CompressionIsometry V = build_isometry(m.space, {ZetaVector{0, e0}}, 1);
  CHECK((V.matrix().col(0) - m.space->product_vector(Word{{0}}, {e0})).norm() < 1e-14);
  for (int j = 1; j < g1.dim(); ++j) {
    Vec ej = Vec::Zero(g1.dim());
    ej[j] = 1.0;
    CHECK((V.matrix().col(j) -
           m.space->product_vector(Word{{0, 1}}, {e0, ej}))
              .norm() < 1e-14);
  }
}

TEST_CASE("isometry construction is validated") {
  MixedPair m(3);
  SplitMix64 rng(52);
  Vec z = random_complement_unit(m.space->factor(0), rng);

  // Non-unit zeta: validation error with a rescaling hint.
  CHECK_THROWS_WITH_AS((void)build_isometry(m.space, {ZetaVector{0, z * 0.5}}, 1),
                       doctest::Contains("norm"), ValidationError);
  // Alternation breach.
  CHECK_THROWS_AS((void)build_isometry(m.space, {ZetaVector{0, z}}, 0), StructuralError);
  // Pattern longer than the depth.
  MixedPair shallow(1);
  Vec z2 = random_complement_unit(shallow.space->factor(0), rng);
  CHECK_THROWS_AS((void)build_isometry(shallow.space, {ZetaVector{0, z2}}, 1),
                  StructuralError);
  // Vacuum component.
  Vec bad = z;
  bad[0] = 0.4;
  bad /= bad.norm();
  CHECK_THROWS_AS((void)build_isometry(m.space, {ZetaVector{0, bad}}, 1),
                  ValidationError);
}

TEST_CASE("classification follows the three branches") {
  // m = 1, n = 1, k1 = i1: the compression is the element itself.
  auto c = classify({0}, {0});
  CHECK(c.branch == LemmaBranch::ScalarTarget);

  // m = 1, n = 2, k1 = i1: scalar times the identity with p = 1.
  c = classify({0, 1}, {0});
  CHECK(c.branch == LemmaBranch::ScalarIdentity);
  CHECK(c.p == 1);

  // k_m != i1 kills it.
  CHECK(classify({0, 1}, {1}).branch == LemmaBranch::Zero);
  CHECK(classify({0, 1}, {1, 0}).branch == LemmaBranch::Zero);

  // Even length dies.
  CHECK(classify({0, 1}, {0, 1}).branch == LemmaBranch::Zero);
  CHECK(classify({0, 1, 0}, {0, 1, 0, 1}).branch == LemmaBranch::Zero);

  // Full mirror at n = 3.
  CHECK(classify({0, 1, 2}, {0, 1, 2, 1, 0}).branch == LemmaBranch::ScalarTarget);
  // Shorter mirror: p = 2 < n = 3.
  c = classify({0, 1, 2}, {0, 1, 0});
  CHECK(c.branch == LemmaBranch::ScalarIdentity);
  CHECK(c.p == 2);
  // Broken mirror.
  CHECK(classify({0, 1, 2}, {0, 2, 0}).branch == LemmaBranch::Zero);

  // Patterns must alternate.
  CHECK_THROWS_AS(classify({0, 0}, {0}), StructuralError);
  CHECK_THROWS_AS(classify({0, 1}, {1, 1, 0}), StructuralError);
}

TEST_CASE("lemma_value: the m = 1 branches carry the stated scalars") {
  MixedPair m(3);
  SplitMix64 rng(53);
  const auto& g0 = m.space->factor(0);
  const auto& g1 = m.space->factor(1);

  // m = 1, n = 2: <a zeta1, zeta1> times the identity.
  Vec z = random_complement_unit(g0, rng);
  CompressionIsometry V = build_isometry(m.space, {ZetaVector{0, z}}, 1);
  auto a = center(random_element(g0.algebra(), rng), g0.state());
  auto lc = lemma_value(V, {Letter{0, a}});
  REQUIRE(lc.classification.branch == LemmaBranch::ScalarIdentity);
  CHECK(std::abs(lc.scalar - z.dot(g0.rep(a) * z)) < 1e-13);

  // m = 1, n = 1: the element itself with scalar 1.
  CompressionIsometry V1 = build_isometry(m.space, {}, 1);
  auto b = center(random_element(g1.algebra(), rng), g1.state());
  auto tc = lemma_value(V1, {Letter{1, b}});
  REQUIRE(tc.classification.branch == LemmaBranch::ScalarTarget);
  CHECK(std::abs(tc.scalar - Cplx(1.0)) < 1e-15);
  REQUIRE(tc.target_elem.has_value());

  // Even m is zero without touching the letters.
  auto z2 = lemma_value(V, {Letter{0, a}, Letter{1, b}});
  CHECK(z2.classification.branch == LemmaBranch::Zero);
  CHECK(std::abs(z2.scalar) == 0.0);

  // Non-centered letters are rejected, not silently centered.
  CHECK_THROWS_AS(
      (void)lemma_value(V, {Letter{0, AlgebraElement::identity(g0.algebra())}}),
      ValidationError);
}

TEST_CASE("compress: identity, the n = 1 recovery, and adjoint symmetry") {
  MixedPair m(3);
  SplitMix64 rng(54);
  CompressionIsometry V1 = build_isometry(m.space, {}, 1);
  const auto& g1 = m.space->factor(1);

  Mat cid = compress(V1, RepOperator::identity(m.space));
  CHECK((cid - Mat::Identity(g1.dim(), g1.dim())).norm() < 1e-13);

  auto x = random_element(g1.algebra(), rng);
  Mat cx = compress(V1, represent(m.space, 1, x));
  CHECK((cx - g1.rep(x)).norm() < 1e-12);

  CompressionIsometry V = two_factor_v2(m, rng);
  RepOperator T = represent(m.space, 0, random_element(m.a0, rng)) *
                  represent(m.space, 1, random_element(m.a1, rng));
  CHECK((compress(V, T).adjoint() - compress(V, T.adjoint())).norm() < 1e-12);
}

TEST_CASE("closed forms agree with the dense oracle across branches") {
  MixedPair m(4);
  auto suite = lemma_suite(m.space, 60, 3, 20240601);
  CHECK(suite.scalar_identity > 0);
  CHECK(suite.scalar_target > 0);
  CHECK(suite.zero_cases > 0);
  CHECK(suite.max_closed_form_residual < 1e-10);
  CHECK(suite.max_zero_branch_norm < 1e-10);
  CHECK(suite.max_main_vs_oracle < 1e-10);
  CHECK(suite.max_isometry_residual < 1e-12);
  CHECK(suite.pass);
}

TEST_CASE("vav surjectivity: n = 1 recovers the factor exactly") {
  MixedPair m(3);
  CompressionIsometry V1 = build_isometry(m.space, {}, 1);
  auto report = vav_surjectivity(V1, SplitMix64(7), 20);
  CHECK(report.max_recovery_residual < 1e-12);
  CHECK(report.max_containment_residual < 1e-8);
  CHECK(report.basis_recovered == 4);
}

TEST_CASE("vav surjectivity at n = 2 on two nontrivial factors") {
  MixedPair m(4);
  SplitMix64 rng(55);
  CompressionIsometry V = two_factor_v2(m, rng);
  auto report = vav_surjectivity(V, SplitMix64(8), 50);
  CHECK(report.n == 2);
  CHECK(report.max_recovery_residual < 1e-8);
  CHECK(report.max_containment_residual < 1e-8);
  CHECK(report.words_checked == 50);

  // The exactness guard names the required depth.
  MixedPair shallow(2);
  SplitMix64 rng2(56);
  std::vector<ZetaVector> zetas{
      ZetaVector{0, random_complement_unit(shallow.space->factor(0), rng2)}};
  CompressionIsometry Vs = build_isometry(shallow.space, zetas, 1);
  CHECK_THROWS_AS((void)vav_surjectivity(Vs, SplitMix64(9), 5), ExactnessError);
}

TEST_CASE("faithfulness witness: the unit and a centered projection") {
  TwoC2 s(4);
  auto rec1 = faithfulness_witness(s.space, NCPoly::constant(1.0));
  CHECK(rec1.found);
  CHECK(rec1.word.length() == 0);
  CHECK(rec1.value == doctest::Approx(1.0));

  // x = p°: <a xi, xi> = phi(p°* p°) = 1/4, witnessed by the vacuum itself.
  auto phi_p = c2_state(s.ap);
  NCPoly x = NCPoly::letter(0, center(s.p, phi_p));
  auto rec2 = faithfulness_witness(s.space, x);
  CHECK(rec2.found);
  CHECK(rec2.word.length() == 0);
  CHECK(rec2.value == doctest::Approx(0.25));
}

TEST_CASE("random probes: two evaluation routes agree and stay positive") {
  TwoC2 s(4);
  SplitMix64 rng(57);
  for (int t = 0; t < 100; ++t) {
    NCPoly x = NCPoly::constant(Cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    const int len = 1 + static_cast<int>(rng.below(2));
    for (int l = 0; l < len; ++l) {
      const int f = static_cast<int>(rng.below(2));
      x = x * NCPoly::letter(f, random_element(s.space->factor(f).algebra(), rng));
    }
    const double via_moment = moment(*s.space, x.adjoint() * x).real();
    const double via_norm =
        apply_poly(*s.space, x, s.space->vacuum_vector()).squaredNorm();
    CHECK(std::abs(via_moment - via_norm) < 1e-10);
    CHECK(via_moment > 1e-9 * via_norm);
  }
}

TEST_CASE("witness scan respects summand minimality") {
  TwoC2 s(4);
  SplitMix64 rng(58);
  NCPoly x = NCPoly::letter(0, random_element(s.ap, rng));
  RepOperator T = represent_poly(s.space, x.adjoint() * x);

  // Mask the operator onto a single length-2 summand: a positive operator
  // supported only there must be witnessed there, not earlier.
  Word w{{1, 0}};
  SpMat mask = projection(s.space, w).matrix();
  SpMat masked = mask * T.matrix * mask;
  auto rec = scan_positive_diagonal(s.space, masked, x.degree() * 2);
  REQUIRE(rec.found);
  CHECK(rec.word.indices == w.indices);
}

TEST_CASE("witnesses beyond the vacuum carry the compression chain check") {
  // Asymmetric factor so the vacuum diagonal is small against the operator
  // norm; a coarse relative threshold pushes the witness to a longer word.
  auto ap = c2_algebra("P");
  auto aq = c2_algebra("Q");
  auto gp = std::make_shared<GnsSpace>(gns_construct(ap, c2_state(ap)));
  auto gq = std::make_shared<GnsSpace>(gns_construct(aq, c2_state(aq, 0.1, 0.9)));
  auto space = std::make_shared<FreeFockSpace>(std::vector<GnsPtr>{gp, gq}, 3);

  auto phi_q = c2_state(aq, 0.1, 0.9);
  NCPoly x = NCPoly::letter(1, center(c2_projection(aq), phi_q));
  Tolerances coarse;
  coarse.pos = 0.2;
  auto rec = faithfulness_witness(space, x, coarse);
  REQUIRE(rec.found);
  CHECK(rec.word.length() >= 1);
  REQUIRE(rec.chain_checked);
  CHECK(std::abs(rec.chain_compressed - rec.chain_direct) < 1e-12);
  CHECK(rec.value > 0.0);
}

TEST_CASE("zero input yields the numerically-zero verdict") {
  TwoC2 s(4);
  auto rec = faithfulness_witness(s.space, NCPoly::zero());
  CHECK_FALSE(rec.found);
  CHECK(rec.max_scanned == 0.0);
}

TEST_CASE("witness scan refuses inexact degree ranges") {
  TwoC2 s(2);
  NCPoly x = NCPoly::letter(0, s.p) * NCPoly::letter(1, s.q);  // degree 2, x*x degree 4
  CHECK_THROWS_AS((void)faithfulness_witness(s.space, x), ExactnessError);
}
