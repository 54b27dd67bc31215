#pragma once

#include <memory>
#include <vector>

#include "freeprod/blockalg.hpp"

namespace freeprod {

/// The GNS triple (pi, H, xi) of a block algebra with a state, expressed in
/// an orthonormal coordinate frame. Frame convention: xi is always index 0,
/// so the complement H° (the orthogonal complement of C xi) occupies indices
/// 1 .. dim-1.
///
/// For a faithful state dim equals the linear dimension of the algebra; for
/// a non-faithful state the null space of the Gram form is quotiented away
/// (rank decided at tol.faithful on Gram eigenvalues) and `non_faithful()`
/// is set.
///
/// Immutable after construction; all queries are pure and safe to share
/// across threads.
class GnsSpace {
 public:
  const AlgebraPtr& algebra() const { return algebra_; }
  const StateSpec& state() const { return state_; }
  int dim() const { return dim_; }
  int complement_dim() const { return dim_ - 1; }
  bool non_faithful() const { return non_faithful_; }

  /// Coordinates of the class of `a` in the orthonormal frame.
  /// vector_of(1) = (1, 0, ..., 0).
  Vec vector_of(const AlgebraElement& a) const;

  /// Matrix of left multiplication by `a` in the frame (the representation).
  Mat rep(const AlgebraElement& a) const;

  /// Orthogonal projection onto H°: v - <v, xi> xi.
  Vec complement_project(const Vec& v) const;

  /// An algebra element whose GNS class is the i-th frame vector.
  AlgebraElement frame_element(int i) const;

  /// <a zeta, xi> for frame coordinates zeta (row 0 of rep(a) applied).
  Cplx pair_with_vacuum(const AlgebraElement& a, const Vec& zeta) const;
  /// <a xi, zeta>.
  Cplx vacuum_against(const AlgebraElement& a, const Vec& zeta) const;

 private:
  friend GnsSpace gns_construct(AlgebraPtr, const StateSpec&, const Tolerances&);
  GnsSpace(AlgebraPtr algebra, StateSpec state)
      : algebra_(std::move(algebra)), state_(std::move(state)) {}

  AlgebraPtr algebra_;
  StateSpec state_;
  int dim_ = 0;
  bool non_faithful_ = false;
  Mat to_frame_;    // dim x D: coordinates |-> frame coordinates
  Mat from_frame_;  // D x dim: right inverse (frame representatives)
};

/// Build the GNS space. Orthonormalization goes through a Hermitian
/// eigendecomposition of the Gram matrix phi(b* a) so the rank decision for
/// non-faithful states is a stable spectral cutoff, then a reflection
/// aligning the class of 1 with frame index 0.
GnsSpace gns_construct(AlgebraPtr algebra, const StateSpec& phi,
                       const Tolerances& tol = Tolerances{});

using GnsPtr = std::shared_ptr<const GnsSpace>;

}  // namespace freeprod
