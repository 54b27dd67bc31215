#pragma once

#include <map>
#include <memory>
#include <vector>

#include "freeprod/gns.hpp"

namespace freeprod {

/// An alternating word of factor indices. Length 0 is the vacuum word.
struct Word {
  std::vector<int> indices;

  int length() const { return static_cast<int>(indices.size()); }
  bool alternating() const;
  bool operator==(const Word& other) const { return indices == other.indices; }
};

/// Canonical word enumeration: ordered by (length, lexicographic), vacuum
/// first, alternation enforced. `num_factors` may be 1, in which case only
/// the vacuum and the single length-1 word exist.
std::vector<Word> enumerate_words(int num_factors, int depth);

/// The truncated free-product Hilbert space: C xi plus one tensor block
/// H°_{i1} x ... x H°_{in} per alternating word of length <= depth. Within a
/// block, coordinates are row-major over the letters' complement indices,
/// letters left to right. Immutable after construction.
class FreeFockSpace {
 public:
  FreeFockSpace(std::vector<GnsPtr> factors, int depth,
                const Tolerances& tol = Tolerances{});

  int depth() const { return depth_; }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  const GnsSpace& factor(int i) const { return *factors_[static_cast<size_t>(i)]; }
  const GnsPtr& factor_ptr(int i) const { return factors_[static_cast<size_t>(i)]; }

  long total_dim() const { return total_dim_; }
  int word_count() const { return static_cast<int>(words_.size()); }
  const Word& word(int wi) const { return words_[static_cast<size_t>(wi)]; }
  long offset(int wi) const { return offsets_[static_cast<size_t>(wi)]; }
  long block_size(int wi) const { return sizes_[static_cast<size_t>(wi)]; }

  /// Index of a word, or -1 when it is not part of the space.
  int find_word(const Word& w) const;

  /// Index of the word with the first letter removed (vacuum -> -1).
  int tail_index(int wi) const { return tails_[static_cast<size_t>(wi)]; }
  /// Index of the word extended on the left by factor `i`, or -1 when the
  /// extension breaks alternation or exceeds the depth.
  int extend_index(int wi, int i) const {
    return extends_[static_cast<size_t>(wi)][static_cast<size_t>(i)];
  }

  /// The vacuum unit vector xi.
  Vec vacuum_vector() const;

  /// Elementary tensor in the block of `w`: components are full factor-frame
  /// coordinates that must lie in the respective H° (vacuum part below
  /// tol.norm relative to the component norm).
  Vec product_vector(const Word& w, const std::vector<Vec>& components,
                     const Tolerances& tol = Tolerances{}) const;

 private:
  std::vector<GnsPtr> factors_;
  int depth_;
  std::vector<Word> words_;
  std::vector<long> offsets_;
  std::vector<long> sizes_;
  std::vector<int> tails_;
  std::vector<std::vector<int>> extends_;
  std::map<std::vector<int>, int> index_;
  long total_dim_;
};

using FockPtr = std::shared_ptr<const FreeFockSpace>;

/// Orthogonal projection onto one word's tensor block.
class SummandProjection {
 public:
  SummandProjection(FockPtr space, const Word& w);

  const Word& word() const { return word_; }
  long rank() const { return size_; }
  Vec apply(const Vec& v) const;
  SpMat matrix() const;

 private:
  FockPtr space_;
  Word word_;
  long offset_;
  long size_;
};

SummandProjection projection(FockPtr space, const Word& w);

}  // namespace freeprod
