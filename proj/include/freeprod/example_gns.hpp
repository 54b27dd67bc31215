#pragma once

#include <vector>

#include "freeprod/gns.hpp"

namespace freeprod {

/// Finite stand-in for the Toeplitz algebra at truncation K: the matrix
/// block M_K carrying the shift S_K together with one appended quotient
/// coordinate where the cut-off tail lives (block structure [K, 1]). The
/// shift element is (S_K, 1): S_K on the matrix block, the unit value on
/// the quotient coordinate. Its isometry defect S*S = 1 - e_{K-1,K-1} x 0
/// is the recorded truncation defect.
struct TruncatedToeplitz {
  int K;
  AlgebraPtr algebra;      // blocks [K, 1]
  AlgebraElement shift;    // (S_K, 1)
  double isometry_defect;  // || 1 - S*S ||_F

  AlgebraElement matrix_unit(int i, int j) const;  // (e_ij, 0)
  AlgebraElement quotient_unit() const;            // (0, 1)
};

TruncatedToeplitz make_truncated_toeplitz(int K);

/// The split model of L^2(A, phi) for A = (Toeplitz stand-in) x M_2 and
/// phi = 1/2 psi1 x tr2 + 1/2 psi0 x rho:
///   - first summand: the full GNS space of psi1 x tr2 (psi1 faithful with
///     geometric weights on the matrix block and tail mass epsilon on the
///     quotient coordinate),
///   - second summand: the two-dimensional quotient GNS space of the pure
///     state rho on M_2 (basis classes of f_11 and f_21), reached through
///     the rank-deficient Gram path; psi0 contributes through the quotient
///     coordinate, so compact matrix units land on zero there.
/// The map V sends a-hat to the pair of its classes; the half-weighted norm
/// on the direct sum makes it an isometry.
class SplitGnsModel {
 public:
  struct Options {
    double tail_mass = 1.0 / 16.0;      // psi1 weight on the quotient coordinate
    std::vector<double> psi1_weights;   // per-column weights; empty = geometric
    Mat rho_density;                    // 0x0 = diag(1, 0); must be pure, rho(f11)=1
  };

  explicit SplitGnsModel(int K) : SplitGnsModel(K, Options{}, Tolerances{}) {}
  SplitGnsModel(int K, Options options, const Tolerances& tol = Tolerances{});

  int K() const { return toeplitz_.K; }
  double tail_mass() const { return tail_mass_; }
  const TruncatedToeplitz& toeplitz() const { return toeplitz_; }
  const AlgebraPtr& tensor_algebra() const { return A_; }
  const AlgebraPtr& m2() const { return m2_; }

  const StateSpec& phi() const { return *phi_; }
  const GnsSpace& first() const { return *first_; }
  const GnsSpace& second() const { return *second_; }

  /// b x y for b in the Toeplitz stand-in and y a 2x2 matrix.
  AlgebraElement embed(const AlgebraElement& b, const Mat& y) const;
  /// e_ij x f_kl and 1 x f_kl.
  AlgebraElement compact_unit(int i, int j, int k, int l) const;
  AlgebraElement m2_unit(int k, int l) const;
  AlgebraElement shift_tensor_unit() const;  // (S_K, 1) x 1

  /// The two components of V a-hat: the class in each summand.
  Vec first_class(const AlgebraElement& a) const;
  Vec second_class(const AlgebraElement& a) const;

  /// phi(a* a) against the half-weighted norm of first_class + second_class.
  double isometry_residual(const AlgebraElement& a) const;

  /// The identified-coordinate frame inside the first summand: orthonormal
  /// classes of e_ij x f_kl with legs flattened as ((i*2+k)*2+l)*K+j, which
  /// realizes the leg order (row of K, row of M_2, column of M_2, column of
  /// K). 4K^2 columns; 4 tail directions of the first summand lie outside.
  const Mat& identified_frame() const { return frame_; }

  /// A commutant element in identified coordinates: acts as
  /// 1 x 1 x D3 x D4 on the frame, zero on the tail directions, and as the
  /// scalar lambda on the second summand.
  Mat commutant_on_first(const Mat& d3, const Mat& d4) const;

  struct VOntoReport {
    int first_dim = 0;                 // dim of the first summand (4K^2 + 4)
    int first_rank_on_matrix_units = 0;  // Gram rank over e_ij x f_kl (4K^2)
    int second_dim = 0;                // 2
    bool phi_faithful = false;
    double phi_margin = 0.0;
    double max_isometry_residual = 0.0;      // over all matrix units of A
    double max_family1_second_norm = 0.0;    // second class of e_ij x f_kl
    double max_family2_second_residual = 0.0;  // second class vs declared basis
    double frame_orthonormality_residual = 0.0;
    double onto_smallest_singular_value = 0.0;  // V-images vs identified frame
    double tail_leak = 0.0;  // image mass outside the identified frame
  };
  VOntoReport verify_v_onto() const;

  struct NoncyclicReport {
    int commutant_span_size = 0;
    int commutator_pairs = 0;
    double max_orthogonality = 0.0;     // |<0 + f21-hat, D xi>| over the span
    double max_commutator_m2 = 0.0;     // against 1 x f_kl generators
    double max_commutator_compact = 0.0;  // against e_ij x f_kl generators
    double max_commutator_shift = 0.0;  // against the shift generator
    double max_commutator_shift_off_boundary = 0.0;  // entries away from row K-1
    double shift_isometry_defect = 0.0;
  };
  /// The orthogonality scan always covers the whole commutant span. The
  /// commutator sweep is dense-matrix heavy, so the caps bound how many
  /// column-leg units / compact generators it draws (0 = all); capped runs
  /// pick a deterministic spread that includes the boundary.
  NoncyclicReport verify_noncyclic(int commutator_d4_cap = 0,
                                   int commutator_compact_cap = 0) const;

 private:
  TruncatedToeplitz toeplitz_;
  AlgebraPtr A_;
  AlgebraPtr m2_;
  double tail_mass_;
  Tolerances tol_;
  std::shared_ptr<StateSpec> phi_;
  std::shared_ptr<StateSpec> psi1_tr_;
  std::shared_ptr<StateSpec> rho_;
  GnsPtr first_;
  GnsPtr second_;
  Mat frame_;  // first_->dim() x 4K^2
};

}  // namespace freeprod
