#include "freeprod/gns.hpp"

#include <Eigen/Eigenvalues>

namespace freeprod {

namespace {

// Left multiplication by `a` on the coordinate space of the algebra
// (row-major vectorization per block): block-diagonal kron(a_b, I_{d_b}).
Mat left_mult_matrix(const AlgebraElement& a) {
  const int D = a.parent()->dim();
  Mat L = Mat::Zero(D, D);
  int off = 0;
  for (size_t b = 0; b < a.blocks().size(); ++b) {
    const Mat& ab = a.blocks()[b];
    const int d = static_cast<int>(ab.rows());
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (ab(i, j) != Cplx(0.0))
          for (int t = 0; t < d; ++t) L(off + i * d + t, off + j * d + t) = ab(i, j);
    off += d * d;
  }
  return L;
}

// Unitary mapping the unit vector v to e_0 (no residual phase).
Mat align_with_first(const Vec& v) {
  const int n = static_cast<int>(v.size());
  Mat Q = Mat::Identity(n, n);
  Cplx alpha = v[0];
  Cplx phase = std::abs(alpha) > 0.0 ? alpha / std::abs(alpha) : Cplx(1.0);
  Vec u = Vec::Zero(n);
  u[0] = phase;
  Vec w = v - u;
  double wn2 = w.squaredNorm();
  if (wn2 > 1e-28) Q -= (2.0 / wn2) * (w * w.adjoint());
  Q.row(0) *= std::conj(phase);
  return Q;
}

}  // namespace

GnsSpace gns_construct(AlgebraPtr algebra, const StateSpec& phi,
                       const Tolerances& tol) {
  if (!phi.parent()->same_as(*algebra))
    throw StructuralError("gns_construct: state does not live on the given algebra");

  const int D = algebra->dim();
  auto basis = standard_basis(algebra);

  // Gram form of the state: G(l,k) = phi(u_l* u_k), so <a^, b^> = y* G x.
  Mat gram(D, D);
  for (int l = 0; l < D; ++l)
    for (int k = 0; k < D; ++k)
      gram(l, k) = state_eval(phi, multiply(adjoint(basis[l]), basis[k]));

  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  const RVec& evals = es.eigenvalues();  // ascending
  int rank = 0;
  for (int i = 0; i < D; ++i)
    if (evals[i] > tol.faithful) ++rank;
  if (rank == 0) throw ValidationError("gns_construct: state has empty support");

  // Keep the top `rank` eigenpairs; T0 = Lambda^{1/2} U*, so frame inner
  // products reproduce the Gram form exactly on classes.
  Mat U(D, rank);
  RVec lam(rank);
  for (int i = 0; i < rank; ++i) {
    U.col(i) = es.eigenvectors().col(D - rank + i);
    lam[i] = evals[D - rank + i];
  }
  Mat to0 = lam.cwiseSqrt().asDiagonal() * Mat(U.adjoint());
  Mat from0 = U * lam.cwiseSqrt().cwiseInverse().asDiagonal();

  // Rotate so the class of 1 is frame vector 0.
  Vec xi0 = to0 * AlgebraElement::identity(algebra).coordinates();
  Mat Q = align_with_first(xi0 / xi0.norm());

  GnsSpace g(algebra, phi);
  g.dim_ = rank;
  g.non_faithful_ = rank < D;
  g.to_frame_ = Q * to0;
  g.from_frame_ = from0 * Q.adjoint();
  return g;
}

Vec GnsSpace::vector_of(const AlgebraElement& a) const {
  if (!a.parent()->same_as(*algebra_))
    throw StructuralError("vector_of: element of a different algebra");
  return to_frame_ * a.coordinates();
}

Mat GnsSpace::rep(const AlgebraElement& a) const {
  if (!a.parent()->same_as(*algebra_))
    throw StructuralError("rep: element of a different algebra");
  return to_frame_ * left_mult_matrix(a) * from_frame_;
}

Vec GnsSpace::complement_project(const Vec& v) const {
  if (v.size() != dim_) throw StructuralError("complement_project: wrong length");
  Vec out = v;
  out[0] = 0.0;
  return out;
}

AlgebraElement GnsSpace::frame_element(int i) const {
  return AlgebraElement::from_coordinates(algebra_, from_frame_.col(i));
}

Cplx GnsSpace::pair_with_vacuum(const AlgebraElement& a, const Vec& zeta) const {
  return (rep(a) * zeta)[0];
}

Cplx GnsSpace::vacuum_against(const AlgebraElement& a, const Vec& zeta) const {
  return zeta.dot(rep(a).col(0));  // Eigen dot conjugates the left argument
}

}  // namespace freeprod
