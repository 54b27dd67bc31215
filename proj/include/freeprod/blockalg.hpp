#pragma once

#include <memory>
#include <string>
#include <vector>

#include "freeprod/common.hpp"

namespace freeprod {

/// A finite-dimensional C*-algebra presented as a direct sum of full
/// complex matrix blocks M_{d_1} + ... + M_{d_k}. Immutable.
class BlockAlgebra {
 public:
  BlockAlgebra(std::vector<int> block_dims, std::string label);

  const std::vector<int>& block_dims() const { return dims_; }
  const std::string& label() const { return label_; }
  int num_blocks() const { return static_cast<int>(dims_.size()); }

  /// Total linear dimension, sum of d_b^2.
  int dim() const { return dim_; }

  /// True when the algebra is more than the scalars (dim > 1). Free-product
  /// factors must be nontrivial.
  bool is_nontrivial() const { return dim_ > 1; }

  bool same_as(const BlockAlgebra& other) const { return this == &other; }

 private:
  std::vector<int> dims_;
  std::string label_;
  int dim_;
};

using AlgebraPtr = std::shared_ptr<const BlockAlgebra>;

/// An element of a BlockAlgebra: one dense complex matrix per block.
class AlgebraElement {
 public:
  AlgebraElement(AlgebraPtr parent, std::vector<Mat> blocks);

  /// The zero / identity elements of `parent`.
  static AlgebraElement zero(AlgebraPtr parent);
  static AlgebraElement identity(AlgebraPtr parent);

  const AlgebraPtr& parent() const { return parent_; }
  const std::vector<Mat>& blocks() const { return blocks_; }
  const Mat& block(int b) const { return blocks_[static_cast<size_t>(b)]; }

  /// Coordinates in the standard basis (matrix units, blocks concatenated,
  /// row-major within each block).
  Vec coordinates() const;
  static AlgebraElement from_coordinates(AlgebraPtr parent, const Vec& coords);

  AlgebraElement operator+(const AlgebraElement& rhs) const;
  AlgebraElement operator-(const AlgebraElement& rhs) const;
  AlgebraElement operator*(const AlgebraElement& rhs) const;  // algebra product
  AlgebraElement operator*(Cplx scalar) const;

  /// Frobenius norm over all blocks.
  double frobenius_norm() const;

 private:
  AlgebraPtr parent_;
  std::vector<Mat> blocks_;
};

/// A state given by one density matrix per block; phi(a) = sum_b tr(rho_b a_b).
class StateSpec {
 public:
  /// Validates Hermiticity, positivity (>= -tol.psd) and unit trace
  /// (within tol.norm). Reports the offending block index and eigenvalue.
  StateSpec(AlgebraPtr parent, std::vector<Mat> densities,
            const Tolerances& tol = Tolerances{});

  const AlgebraPtr& parent() const { return parent_; }
  const std::vector<Mat>& densities() const { return densities_; }
  const Mat& density(int b) const { return densities_[static_cast<size_t>(b)]; }

  /// Smallest density eigenvalue over all blocks.
  double faithfulness_margin() const { return margin_; }

 private:
  AlgebraPtr parent_;
  std::vector<Mat> densities_;
  double margin_;
};

// Operations ----------------------------------------------------------------

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement adjoint(const AlgebraElement& a);
Cplx state_eval(const StateSpec& phi, const AlgebraElement& a);

struct FaithfulnessResult {
  bool faithful;
  double margin;  // min over blocks of min eigenvalue of rho_b
};
FaithfulnessResult is_faithful(const StateSpec& phi,
                               const Tolerances& tol = Tolerances{});

/// Centered part a - phi(a) 1, an element of ker phi.
AlgebraElement center(const AlgebraElement& a, const StateSpec& phi);

/// Standard basis of the algebra: matrix units block by block, row-major.
std::vector<AlgebraElement> standard_basis(AlgebraPtr algebra);

inline AlgebraElement operator*(Cplx scalar, const AlgebraElement& a) {
  return a * scalar;
}

}  // namespace freeprod
