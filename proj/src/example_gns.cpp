#include "freeprod/example_gns.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace freeprod {

namespace {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat m2_matrix_unit(int k, int l) {
  Mat e = Mat::Zero(2, 2);
  e(k, l) = 1.0;
  return e;
}

}  // namespace

AlgebraElement TruncatedToeplitz::matrix_unit(int i, int j) const {
  std::vector<Mat> blocks{Mat::Zero(K, K), Mat::Zero(1, 1)};
  blocks[0](i, j) = 1.0;
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement TruncatedToeplitz::quotient_unit() const {
  std::vector<Mat> blocks{Mat::Zero(K, K), Mat::Ones(1, 1)};
  return AlgebraElement(algebra, std::move(blocks));
}

TruncatedToeplitz make_truncated_toeplitz(int K) {
  if (K < 2) throw ValidationError("truncated Toeplitz stand-in needs K >= 2");
  auto algebra = std::make_shared<BlockAlgebra>(std::vector<int>{K, 1},
                                                "toeplitz_" + std::to_string(K));
  Mat s = Mat::Zero(K, K);
  for (int i = 0; i + 1 < K; ++i) s(i + 1, i) = 1.0;
  AlgebraElement shift(algebra, {s, Mat::Ones(1, 1)});

  AlgebraElement defect =
      AlgebraElement::identity(algebra) - multiply(adjoint(shift), shift);
  // The defect is the rank-one boundary projection e_{K-1,K-1} x 0.
  return TruncatedToeplitz{K, algebra, shift, defect.frobenius_norm()};
}

SplitGnsModel::SplitGnsModel(int K, Options options, const Tolerances& tol)
    : toeplitz_(make_truncated_toeplitz(K)), tol_(tol) {
  if (K < 3) throw ValidationError("split model needs K >= 3");
  tail_mass_ = options.tail_mass;
  if (!(tail_mass_ > 0.0) || tail_mass_ >= 1.0)
    throw ValidationError("tail mass must lie in (0, 1)");

  std::vector<double> w = options.psi1_weights;
  if (w.empty()) {
    // Geometric weights: the classical faithful diagonal state, truncated.
    double norm = 1.0 - std::pow(0.5, K);
    for (int j = 0; j < K; ++j) w.push_back(std::pow(0.5, j + 1) / norm);
  }
  if (static_cast<int>(w.size()) != K)
    throw ValidationError("psi1 needs one weight per column");
  double wsum = 0.0;
  for (double x : w) {
    if (!(x > 0.0)) throw ValidationError("psi1 weights must be strictly positive");
    wsum += x;
  }
  for (double& x : w) x *= (1.0 - tail_mass_) / wsum;

  Mat rho = options.rho_density;
  if (rho.size() == 0) rho = Mat::Zero(2, 2), rho(0, 0) = 1.0;
  if (rho.rows() != 2 || rho.cols() != 2 || (rho - rho.adjoint()).norm() > tol.norm)
    throw ValidationError("rho must be a Hermitian 2x2 density");
  if (std::abs(rho(0, 0).real() - 1.0) > tol.norm || std::abs(rho.trace().real() - 1.0) > tol.norm)
    throw ValidationError("rho must be pure with rho(f11) = 1");
  Eigen::SelfAdjointEigenSolver<Mat> rho_eig(rho, Eigen::EigenvaluesOnly);
  if (rho_eig.eigenvalues().minCoeff() < -tol.psd ||
      std::abs(rho_eig.eigenvalues().maxCoeff() - 1.0) > tol.norm)
    throw ValidationError("rho must be a pure state");

  m2_ = std::make_shared<BlockAlgebra>(std::vector<int>{2}, "M2");
  A_ = std::make_shared<BlockAlgebra>(std::vector<int>{2 * K, 2},
                                      toeplitz_.algebra->label() + "_x_M2");

  Mat wdiag = Mat::Zero(K, K);
  for (int j = 0; j < K; ++j) wdiag(j, j) = w[static_cast<size_t>(j)];
  const Mat half_tr2 = 0.5 * Mat::Identity(2, 2);

  // psi1 x tr2 and psi0 x rho as block densities on A.
  Mat d1_block1 = kron(wdiag, half_tr2);
  Mat d1_block2 = tail_mass_ * half_tr2;
  Mat d0_block1 = Mat::Zero(2 * K, 2 * K);
  Mat d0_block2 = rho;

  psi1_tr_ = std::make_shared<StateSpec>(A_, std::vector<Mat>{d1_block1, d1_block2}, tol);
  phi_ = std::make_shared<StateSpec>(
      A_,
      std::vector<Mat>{0.5 * d1_block1 + 0.5 * d0_block1,
                       0.5 * d1_block2 + 0.5 * d0_block2},
      tol);
  rho_ = std::make_shared<StateSpec>(m2_, std::vector<Mat>{rho}, tol);

  first_ = std::make_shared<GnsSpace>(gns_construct(A_, *psi1_tr_, tol));
  second_ = std::make_shared<GnsSpace>(gns_construct(m2_, *rho_, tol));

  // Identified-coordinate frame: normalized classes of e_ij x f_kl with legs
  // flattened as ((i*2+k)*2+l)*K + j.
  frame_ = Mat::Zero(first_->dim(), 4 * K * K);
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int j = 0; j < K; ++j) {
          Vec v = first_->vector_of(compact_unit(i, j, k, l));
          frame_.col(((i * 2 + k) * 2 + l) * K + j) = v / v.norm();
        }
}

AlgebraElement SplitGnsModel::embed(const AlgebraElement& b, const Mat& y) const {
  if (!b.parent()->same_as(*toeplitz_.algebra))
    throw StructuralError("embed expects an element of the Toeplitz stand-in");
  std::vector<Mat> blocks{kron(b.block(0), y), b.block(1)(0, 0) * y};
  return AlgebraElement(A_, std::move(blocks));
}

AlgebraElement SplitGnsModel::compact_unit(int i, int j, int k, int l) const {
  return embed(toeplitz_.matrix_unit(i, j), m2_matrix_unit(k, l));
}

AlgebraElement SplitGnsModel::m2_unit(int k, int l) const {
  return embed(AlgebraElement::identity(toeplitz_.algebra), m2_matrix_unit(k, l));
}

AlgebraElement SplitGnsModel::shift_tensor_unit() const {
  return embed(toeplitz_.shift, Mat::Identity(2, 2));
}

Vec SplitGnsModel::first_class(const AlgebraElement& a) const {
  return first_->vector_of(a);
}

Vec SplitGnsModel::second_class(const AlgebraElement& a) const {
  // psi0 evaluates the Toeplitz leg at the quotient coordinate, which is the
  // second block of A; its class lives in the two-dimensional rho space.
  return second_->vector_of(AlgebraElement(m2_, {a.block(1)}));
}

double SplitGnsModel::isometry_residual(const AlgebraElement& a) const {
  const double lhs =
      0.5 * (first_class(a).squaredNorm() + second_class(a).squaredNorm());
  const double rhs = state_eval(*phi_, multiply(adjoint(a), a)).real();
  return std::abs(lhs - rhs);
}

Mat SplitGnsModel::commutant_on_first(const Mat& d3, const Mat& d4) const {
  const int K = toeplitz_.K;
  Mat legs = kron(Mat::Identity(2 * K, 2 * K), kron(d3, d4));
  return frame_ * legs * frame_.adjoint();
}

SplitGnsModel::VOntoReport SplitGnsModel::verify_v_onto() const {
  const int K = toeplitz_.K;
  VOntoReport report;
  report.first_dim = first_->dim();
  report.second_dim = second_->dim();

  auto faith = is_faithful(*phi_, tol_);
  report.phi_faithful = faith.faithful;
  report.phi_margin = faith.margin;

  // Gram rank of the compact matrix-unit classes, by brute force.
  Mat classes(first_->dim(), 4 * K * K);
  {
    int col = 0;
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            classes.col(col++) = first_class(compact_unit(i, j, k, l));
  }
  Eigen::SelfAdjointEigenSolver<Mat> gram_eig(classes.adjoint() * classes,
                                              Eigen::EigenvaluesOnly);
  for (int i = 0; i < gram_eig.eigenvalues().size(); ++i)
    if (gram_eig.eigenvalues()[i] > tol_.faithful) ++report.first_rank_on_matrix_units;

  // Isometry of V over every matrix unit of A.
  for (const auto& b : standard_basis(A_))
    report.max_isometry_residual =
        std::max(report.max_isometry_residual, isometry_residual(b));

  // Family 1: compacts land on zero in the second summand.
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          report.max_family1_second_norm =
              std::max(report.max_family1_second_norm,
                       second_class(compact_unit(i, j, k, l)).norm());

  // Family 2: second components are exactly the declared two-dimensional
  // basis classes (Gram = identity against them).
  {
    Mat g(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        g(a, b) = second_class(m2_unit(b, 0)).dot(second_class(m2_unit(a, 0)));
    report.max_family2_second_residual = (g - Mat::Identity(2, 2)).norm();
  }

  report.frame_orthonormality_residual =
      (frame_.adjoint() * frame_ - Mat::Identity(4 * K * K, 4 * K * K)).norm();

  // Ontoness against the identified frame: coordinates of the two families'
  // V-images in the half-weighted orthonormal frame of H'.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Mat coords(4 * K * K + 2, 4 * K * K + 2);
  double tail_leak = 0.0;
  int col = 0;
  auto fill_column = [&](const AlgebraElement& a) {
    Vec c1 = first_class(a);
    Vec c2 = second_class(a);
    Vec top = inv_sqrt2 * (frame_.adjoint() * c1);
    coords.col(col).head(4 * K * K) = top;
    coords.col(col).tail(2) = inv_sqrt2 * c2;
    const double full = 0.5 * (c1.squaredNorm() + c2.squaredNorm());
    tail_leak = std::max(tail_leak, full - coords.col(col).squaredNorm());
    ++col;
  };
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int j = 0; j < K; ++j) fill_column(compact_unit(i, j, k, l));
  fill_column(m2_unit(0, 0));  // 1 x f_11
  fill_column(m2_unit(1, 0));  // 1 x f_21
  Eigen::BDCSVD<Mat> svd(coords);
  report.onto_smallest_singular_value = svd.singularValues().minCoeff();
  report.tail_leak = tail_leak;
  return report;
}

SplitGnsModel::NoncyclicReport SplitGnsModel::verify_noncyclic(
    int commutator_d4_cap, int commutator_compact_cap) const {
  const int K = toeplitz_.K;
  NoncyclicReport report;
  report.shift_isometry_defect = toeplitz_.isometry_defect;
  report.commutant_span_size = 4 * K * K + 1;

  const AlgebraElement one = AlgebraElement::identity(A_);
  const Vec xi2 = second_class(one);
  const Vec target2 = second_class(m2_unit(1, 0));  // the f_21-hat direction

  // Orthogonality of 0 + f21-hat against D xi over the whole span. D xi has
  // first component D1 xi1 and second component lambda xi2; the target has
  // no first component, so the half-weighted pairing reduces to the second
  // summand. Matrix-unit span elements have lambda = 0, the scalar element
  // lambda = 1.
  for (int s = 0; s < report.commutant_span_size; ++s) {
    const Cplx lam = (s + 1 == report.commutant_span_size) ? Cplx(1.0) : Cplx(0.0);
    const Cplx val = 0.5 * target2.dot(lam * xi2);
    report.max_orthogonality = std::max(report.max_orthogonality, std::abs(val));
  }

  // Commutator sweep. D acts on the second summand as a scalar, which
  // commutes with the two-dimensional action exactly, so only the first
  // summand contributes.
  auto spread = [&](int cap) {
    std::vector<std::pair<int, int>> picks;
    if (cap <= 0 || cap >= K * K) {
      for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b) picks.emplace_back(a, b);
    } else {
      for (int a = 0; a < K && static_cast<int>(picks.size()) < cap; ++a)
        picks.emplace_back(a, a);
      std::vector<std::pair<int, int>> edge{{0, K - 1}, {K - 1, 0}, {K - 2, K - 1},
                                            {K - 1, K - 2}, {0, 1}, {1, 0}};
      for (auto e : edge)
        if (static_cast<int>(picks.size()) < cap) picks.push_back(e);
    }
    return picks;
  };

  std::vector<Mat> dmats;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (auto [a, b] : spread(commutator_d4_cap)) {
        Mat e4 = Mat::Zero(K, K);
        e4(a, b) = 1.0;
        dmats.push_back(commutant_on_first(m2_matrix_unit(k, l), e4));
      }

  auto pi_first = [&](const AlgebraElement& x) { return first_->rep(x); };
  auto sweep = [&](const AlgebraElement& gen, double& slot) {
    const Mat p1 = pi_first(gen);
    for (const Mat& dmat : dmats) {
      slot = std::max(slot, (dmat * p1 - p1 * dmat).norm());
      ++report.commutator_pairs;
    }
  };

  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) sweep(m2_unit(k, l), report.max_commutator_m2);

  for (auto [i, j] : spread(commutator_compact_cap))
    sweep(compact_unit(i, j, 0, 1), report.max_commutator_compact);

  {
    const AlgebraElement gen = shift_tensor_unit();
    const Mat p1 = pi_first(gen);
    for (const Mat& dmat : dmats) {
      const Mat comm = dmat * p1 - p1 * dmat;
      report.max_commutator_shift = std::max(report.max_commutator_shift, comm.norm());
      ++report.commutator_pairs;
      // Support analysis in identified coordinates: entries whose row and
      // column legs both avoid the boundary row i = K-1 of the shift.
      Mat cid = frame_.adjoint() * comm * frame_;
      for (int r = 0; r < cid.rows(); ++r)
        for (int c = 0; c < cid.cols(); ++c)
          if (r / (4 * K) < K - 1 && c / (4 * K) < K - 1)
            report.max_commutator_shift_off_boundary = std::max(
                report.max_commutator_shift_off_boundary, std::abs(cid(r, c)));
    }
  }
  return report;
}

}  // namespace freeprod
