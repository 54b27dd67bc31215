#pragma once

#include <vector>

#include "freeprod/compress.hpp"

namespace freeprod {

/// Independent dense reference for the truncated free-product machinery.
/// Everything here is rebuilt from scratch: its own word enumeration
/// (depth-first rather than by length), factor representation matrices
/// recomputed through state arithmetic on frame representatives, explicit
/// naive tensor products, and full dense matrix algebra. It shares only
/// the block-algebra arithmetic with the main path.
class DenseSpace {
 public:
  DenseSpace(std::vector<GnsPtr> factors, int depth);

  long total_dim() const { return total_dim_; }
  int depth() const { return depth_; }
  int word_count() const { return static_cast<int>(words_.size()); }
  const Word& word(int wi) const { return words_[static_cast<size_t>(wi)]; }

  /// oracle basis index -> main-space basis index.
  std::vector<long> permutation_to(const FreeFockSpace& main) const;

  /// Dense matrix of the left action of `a` in factor `i`, in the oracle's
  /// own basis order.
  Mat dense_represent(int factor, const AlgebraElement& a) const;

  /// Full dense product of the represented letters, summed over terms.
  Mat dense_poly(const NCPoly& p) const;

  /// <p xi, xi> through full dense matrix products.
  Cplx dense_moment(const NCPoly& p) const;

  /// <p e, e> for the oracle basis vector with index `oracle_index`.
  Cplx dense_expectation(const NCPoly& p, long oracle_index) const;

  /// The isometry matrix assembled via explicit naive tensor products.
  Mat dense_isometry(const std::vector<ZetaVector>& zetas, int target_factor) const;

  /// V* (a_1 ... a_m) V with every piece computed densely.
  Mat dense_compress(const std::vector<ZetaVector>& zetas, int target_factor,
                     const std::vector<Letter>& letters) const;

 private:
  struct Basis {
    int word_index;
    std::vector<int> multi;  // complement indices per letter
  };

  long index_of(int word_index, const std::vector<int>& multi) const;
  Mat factor_rep(int factor, const AlgebraElement& a) const;

  std::vector<GnsPtr> factors_;
  int depth_;
  std::vector<Word> words_;
  std::vector<long> offsets_;
  std::vector<long> sizes_;
  std::vector<Basis> basis_;  // decoded labels per global index
  long total_dim_;
};

struct LemmaSuiteReport {
  int instances = 0;
  long scalar_identity = 0;
  long scalar_target = 0;
  long zero_cases = 0;
  double max_closed_form_residual = 0.0;  // closed form vs dense compression
  double max_zero_branch_norm = 0.0;      // direct norms on the zero branch
  double max_main_vs_oracle = 0.0;        // sparse-path compression vs dense
  double max_isometry_residual = 0.0;     // ||V*V - I|| over all built V
  bool pass = false;
};

/// Seeded random instances of the three compression branches, each checked
/// against the dense oracle. Instance k draws from the split substream k,
/// so the suite is reproducible and order-independent.
LemmaSuiteReport lemma_suite(FockPtr space, int instances, int max_n,
                             std::uint64_t seed,
                             const Tolerances& tol = Tolerances{});

}  // namespace freeprod
