#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace fptest;

TEST_CASE("gns dimensions: faithful states see the whole algebra") {
  auto a = c2_algebra();
  auto g = gns_construct(a, c2_state(a));
  CHECK(g.dim() == 2);
  CHECK_FALSE(g.non_faithful());

  auto m = m2_algebra();
  auto gm = gns_construct(m, m2_state(m));
  CHECK(gm.dim() == 4);
  CHECK(gm.complement_dim() == 3);
}

TEST_CASE("the centered projection of the symmetric two-point state has norm 1/2") {
  auto a = c2_algebra();
  auto phi = c2_state(a);
  auto g = gns_construct(a, phi);
  auto pc = center(c2_projection(a), phi);
  // phi(pc* pc) = 1/4, so the class has norm 1/2.
  CHECK(state_eval(phi, multiply(adjoint(pc), pc)).real() == doctest::Approx(0.25));
  CHECK(g.vector_of(pc).norm() == doctest::Approx(0.5));
}

TEST_CASE("pure state on M2: quotient rank 2, matching the brute-force Gram rank") {
  auto m = m2_algebra();
  auto pure = m2_state(m, 1.0, 0.0);
  auto g = gns_construct(m, pure);
  CHECK(g.dim() == 2);
  CHECK(g.non_faithful());

  // Independent rank computation over the matrix-unit basis.
  auto basis = standard_basis(m);
  Mat gram(4, 4);
  for (int l = 0; l < 4; ++l)
    for (int k = 0; k < 4; ++k)
      gram(l, k) = state_eval(pure, multiply(adjoint(basis[l]), basis[k]));
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  int rank = 0;
  for (int i = 0; i < 4; ++i)
    if (es.eigenvalues()[i] > 1e-8) ++rank;
  CHECK(rank == 2);
}

TEST_CASE("vector_of: the unit maps to the first frame vector") {
  auto m = m2_algebra();
  auto phi = m2_state(m, 0.3, 0.7);
  auto g = gns_construct(m, phi);
  Vec xi = g.vector_of(AlgebraElement::identity(m));
  CHECK(std::abs(xi[0] - Cplx(1.0)) < 1e-12);
  CHECK(xi.segment(1, g.dim() - 1).norm() < 1e-12);

  SplitMix64 rng(21);
  for (int t = 0; t < 50; ++t) {
    auto x = random_element(m, rng);
    const double n2 = g.vector_of(x).squaredNorm();
    const double expected = state_eval(phi, multiply(adjoint(x), x)).real();
    CHECK(n2 == doctest::Approx(expected).epsilon(1e-10));
  }

  auto a = c2_algebra();
  auto psi = c2_state(a);
  auto ga = gns_construct(a, psi);
  Vec v = ga.vector_of(c2_projection(a));
  CHECK(std::abs(v[0] - Cplx(0.5)) < 1e-13);  // <p-hat, xi> = phi(p)
}

TEST_CASE("complement_project drops exactly the vacuum coordinate") {
  auto a = c2_algebra();
  auto phi = c2_state(a);
  auto g = gns_construct(a, phi);

  Vec xi = Vec::Zero(2);
  xi[0] = 1.0;
  CHECK(g.complement_project(xi).norm() < 1e-15);

  Vec w = Vec::Zero(2);
  w[1] = Cplx(0.3, -0.4);
  CHECK((g.complement_project(w) - w).norm() < 1e-15);

  SplitMix64 rng(22);
  auto m = m2_algebra();
  auto psi = m2_state(m, 0.4, 0.6);
  auto gm = gns_construct(m, psi);
  for (int t = 0; t < 20; ++t) {
    auto x = random_element(m, rng);
    Vec lhs = gm.complement_project(gm.vector_of(x));
    Vec rhs = gm.vector_of(center(x, psi));
    CHECK((lhs - rhs).norm() < 1e-11);
  }
}

TEST_CASE("rep is a unital *-homomorphism recovering the state") {
  auto m = m2_algebra();
  auto phi = m2_state(m, 0.3, 0.7);
  auto g = gns_construct(m, phi);

  Mat id = g.rep(AlgebraElement::identity(m));
  CHECK((id - Mat::Identity(4, 4)).norm() < 1e-12);

  SplitMix64 rng(23);
  for (int t = 0; t < 100; ++t) {
    auto x = random_element(m, rng);
    auto y = random_element(m, rng);
    CHECK((g.rep(multiply(x, y)) - g.rep(x) * g.rep(y)).norm() < 1e-10);
    CHECK((g.rep(adjoint(x)) - g.rep(x).adjoint()).norm() < 1e-10);
  }

  for (const auto& b : standard_basis(m)) {
    Vec xi = Vec::Zero(4);
    xi[0] = 1.0;
    Cplx lhs = xi.dot(g.rep(b) * xi);
    CHECK(std::abs(lhs - state_eval(phi, b)) < 1e-12);
  }
}

TEST_CASE("the class of 1 is cyclic") {
  auto m = m2_algebra();
  auto phi = m2_state(m, 0.2, 0.8);
  auto g = gns_construct(m, phi);
  auto basis = standard_basis(m);
  Mat cols(g.dim(), static_cast<long>(basis.size()));
  Vec xi = Vec::Zero(g.dim());
  xi[0] = 1.0;
  for (size_t i = 0; i < basis.size(); ++i) cols.col(static_cast<long>(i)) = g.rep(basis[i]) * xi;
  Eigen::ColPivHouseholderQR<Mat> qr(cols);
  CHECK(qr.rank() == g.dim());
}

TEST_CASE("quotient rep stays multiplicative on the pure state") {
  auto m = m2_algebra();
  auto pure = m2_state(m, 1.0, 0.0);
  auto g = gns_construct(m, pure);
  SplitMix64 rng(24);
  for (int t = 0; t < 50; ++t) {
    auto x = random_element(m, rng);
    auto y = random_element(m, rng);
    CHECK((g.rep(multiply(x, y)) - g.rep(x) * g.rep(y)).norm() < 1e-10);
    CHECK((g.vector_of(multiply(x, y)) - g.rep(x) * g.vector_of(y)).norm() < 1e-10);
  }
}

TEST_CASE("frame elements represent the frame vectors") {
  auto m = m2_algebra();
  auto phi = m2_state(m, 0.45, 0.55);
  auto g = gns_construct(m, phi);
  for (int i = 0; i < g.dim(); ++i) {
    Vec e = Vec::Zero(g.dim());
    e[i] = 1.0;
    CHECK((g.vector_of(g.frame_element(i)) - e).norm() < 1e-11);
  }
}

TEST_CASE("vacuum pairings agree with the rep matrix") {
  auto m = m2_algebra();
  auto phi = m2_state(m, 0.35, 0.65);
  auto g = gns_construct(m, phi);
  SplitMix64 rng(25);
  auto x = random_element(m, rng);
  Vec zeta = random_complement_unit(g, rng);
  Mat r = g.rep(x);
  CHECK(std::abs(g.pair_with_vacuum(x, zeta) - (r * zeta)[0]) < 1e-13);
  Vec e0 = Vec::Zero(g.dim());
  e0[0] = 1.0;
  CHECK(std::abs(g.vacuum_against(x, zeta) - zeta.dot(r * e0)) < 1e-13);
}
