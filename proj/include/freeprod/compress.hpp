#pragma once

#include <optional>
#include <vector>

#include "freeprod/freerep.hpp"
#include "freeprod/rng.hpp"

namespace freeprod {

/// A tagged complement vector: full frame coordinates in factor `factor`'s
/// GNS space, vacuum component zero.
struct ZetaVector {
  int factor;
  Vec coords;
};

/// The isometry V determined by unit vectors zeta_1..zeta_{n-1} (in the
/// complements of factors i_1..i_{n-1}) and a target factor i_n:
///   V xi_{i_n} = zeta_1 x ... x zeta_{n-1}
///   V zeta     = zeta_1 x ... x zeta_{n-1} x zeta   (zeta in H°_{i_n}).
/// The factor pattern i_1..i_n must alternate and n <= depth.
class CompressionIsometry {
 public:
  const FockPtr& space() const { return space_; }
  /// The pattern i_1..i_n, target last.
  const std::vector<int>& pattern() const { return pattern_; }
  int n() const { return static_cast<int>(pattern_.size()); }
  int target_factor() const { return pattern_.back(); }
  const std::vector<Vec>& zetas() const { return zetas_; }
  /// total_dim x dim(H_{i_n}).
  const Mat& matrix() const { return matrix_; }

 private:
  friend CompressionIsometry build_isometry(FockPtr, const std::vector<ZetaVector>&,
                                            int, const Tolerances&);
  CompressionIsometry() = default;
  FockPtr space_;
  std::vector<int> pattern_;
  std::vector<Vec> zetas_;
  Mat matrix_;
};

CompressionIsometry build_isometry(FockPtr space, const std::vector<ZetaVector>& zetas,
                                   int target_factor,
                                   const Tolerances& tol = Tolerances{});

enum class LemmaBranch { ScalarIdentity, ScalarTarget, Zero };

const char* to_string(LemmaBranch b);

struct LemmaClassification {
  LemmaBranch branch;
  int p = 0;  // for ScalarIdentity: the letter count is m = 2p-1 with p < n
};

/// Decide which closed-form branch a letter pattern k_1..k_m falls in
/// against the isometry pattern i_1..i_n. Both patterns must alternate.
LemmaClassification classify(const std::vector<int>& isometry_pattern,
                             const std::vector<int>& letter_pattern);

/// Closed-form value of V* a_1...a_m V for centered letters.
struct LemmaCase {
  LemmaClassification classification;
  Cplx scalar = 0.0;                          // c; 0 for the Zero branch
  std::optional<AlgebraElement> target_elem;  // a_n for ScalarTarget
};

/// Evaluate the closed form. The letters must be centered in their factors
/// (validated against tol.norm relative to the element norm) and their
/// factor pattern must alternate.
LemmaCase lemma_value(const CompressionIsometry& V, const std::vector<Letter>& letters,
                      const Tolerances& tol = Tolerances{});

/// Direct compression V* T V as a dense dim(H_{i_n}) square matrix. Exact
/// (beyond float) when T is a represented product of centered alternating
/// letters with n <= depth, or any represented product of at most
/// depth - n letters.
Mat compress(const CompressionIsometry& V, const RepOperator& T);

struct VavReport {
  int n = 0;
  int basis_recovered = 0;
  double max_recovery_residual = 0.0;   // || V*(a_1..a_{2n-1})V / c - rep(b) ||
  int words_checked = 0;
  double max_containment_residual = 0.0;  // distance of V*TV to span rep(A_{i_n})
};

/// Verify V* A V = A_{i_n} computationally: recover every basis element of
/// the target factor through the closed-form scalar (following the witness
/// recipe: pick companions with nonvanishing vacuum pairings), and check
/// that compressions of random represented words stay in the span of the
/// target's represented algebra. Requires n <= (depth+1)/2 so the products
/// involved stay exact.
VavReport vav_surjectivity(const CompressionIsometry& V, SplitMix64 rng,
                           int random_words = 50,
                           const Tolerances& tol = Tolerances{});

struct WitnessRecord {
  bool found = false;
  Word word;                // empty = vacuum
  long coordinate = -1;     // global coordinate index of the witness vector
  double value = 0.0;       // <a eta, eta>
  double scale = 1.0;       // ||a|| estimate used for the relative threshold
  double max_scanned = 0.0; // largest diagonal value seen
  int scanned = 0;          // number of basis vectors scanned
  // Two-route check when the witness word is nonvacuous: <a V xi, V xi>
  // evaluated through the compression against the direct tensor pairing.
  bool chain_checked = false;
  double chain_compressed = 0.0;
  double chain_direct = 0.0;
};

/// Scan the diagonal of a represented positive operator over the vacuum and
/// the product basis vectors, words in canonical ascending order, restricted
/// to word lengths d with d <= depth - operator_degree so every scanned
/// value is exact. Returns the first entry exceeding tol.pos * scale.
WitnessRecord scan_positive_diagonal(FockPtr space, const SpMat& op_matrix,
                                     int operator_degree,
                                     const Tolerances& tol = Tolerances{});

/// The faithfulness probe for a := x* x. For nonzero x the vacuum already
/// reports phi(x*x) > 0; the scan over longer words mirrors the summand
/// search that locates where a positive element lives. When every scanned
/// value is below threshold the record comes back with found = false and
/// max_scanned describing how close to zero a is at this exactness range.
WitnessRecord faithfulness_witness(FockPtr space, const NCPoly& x,
                                   const Tolerances& tol = Tolerances{});

}  // namespace freeprod
