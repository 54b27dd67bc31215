#include "freeprod/freefock.hpp"

#include <algorithm>
#include <sstream>

namespace freeprod {

bool Word::alternating() const {
  for (size_t j = 0; j + 1 < indices.size(); ++j)
    if (indices[j] == indices[j + 1]) return false;
  return true;
}

std::vector<Word> enumerate_words(int num_factors, int depth) {
  if (depth < 1) throw StructuralError("enumerate_words: depth must be >= 1");
  if (num_factors < 1) throw StructuralError("enumerate_words: no factors");
  std::vector<Word> all{Word{}};
  std::vector<Word> level{Word{}};
  for (int n = 1; n <= depth; ++n) {
    std::vector<Word> next;
    for (const Word& w : level) {
      for (int i = 0; i < num_factors; ++i) {
        if (!w.indices.empty() && w.indices.back() == i) continue;
        Word ext = w;
        ext.indices.push_back(i);
        next.push_back(std::move(ext));
      }
    }
    // Extending lexicographically ordered words by ascending factors keeps
    // lexicographic order only when extending on the right; re-sort to pin it.
    std::sort(next.begin(), next.end(),
              [](const Word& a, const Word& b) { return a.indices < b.indices; });
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
    if (level.empty()) break;  // single factor: nothing beyond length 1
  }
  return all;
}

FreeFockSpace::FreeFockSpace(std::vector<GnsPtr> factors, int depth,
                             const Tolerances& tol)
    : factors_(std::move(factors)), depth_(depth) {
  (void)tol;
  if (depth_ < 1) throw StructuralError("free-product space: depth must be >= 1");
  if (factors_.empty()) throw StructuralError("free-product space: no factors");
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i]->complement_dim() < 1) {
      std::ostringstream msg;
      msg << "free-product space: factor " << i << " ('"
          << factors_[i]->algebra()->label()
          << "') is one-dimensional; factors must be larger than the scalars";
      throw ValidationError(msg.str());
    }
  }

  words_ = enumerate_words(num_factors(), depth_);
  offsets_.resize(words_.size());
  sizes_.resize(words_.size());
  long off = 0;
  for (size_t wi = 0; wi < words_.size(); ++wi) {
    long size = 1;
    for (int i : words_[wi].indices) size *= factors_[static_cast<size_t>(i)]->complement_dim();
    offsets_[wi] = off;
    sizes_[wi] = size;
    off += size;
    index_[words_[wi].indices] = static_cast<int>(wi);
  }
  total_dim_ = off;

  tails_.assign(words_.size(), -1);
  extends_.assign(words_.size(), std::vector<int>(factors_.size(), -1));
  for (size_t wi = 0; wi < words_.size(); ++wi) {
    const auto& idx = words_[wi].indices;
    if (!idx.empty()) {
      std::vector<int> tail(idx.begin() + 1, idx.end());
      tails_[wi] = index_.at(tail);
    }
    if (static_cast<int>(idx.size()) < depth_) {
      for (int i = 0; i < num_factors(); ++i) {
        if (!idx.empty() && idx.front() == i) continue;
        std::vector<int> ext;
        ext.reserve(idx.size() + 1);
        ext.push_back(i);
        ext.insert(ext.end(), idx.begin(), idx.end());
        extends_[wi][static_cast<size_t>(i)] = index_.at(ext);
      }
    }
  }
}

int FreeFockSpace::find_word(const Word& w) const {
  auto it = index_.find(w.indices);
  return it == index_.end() ? -1 : it->second;
}

Vec FreeFockSpace::vacuum_vector() const {
  Vec v = Vec::Zero(total_dim_);
  v[0] = 1.0;
  return v;
}

Vec FreeFockSpace::product_vector(const Word& w, const std::vector<Vec>& components,
                                  const Tolerances& tol) const {
  int wi = find_word(w);
  if (wi < 0) throw StructuralError("product_vector: word not in this space");
  if (static_cast<int>(components.size()) != w.length())
    throw StructuralError("product_vector: one component per letter required");

  // kron of the complement parts, letters left to right (row-major layout).
  Vec block = Vec::Ones(1);
  for (int j = 0; j < w.length(); ++j) {
    const GnsSpace& f = factor(w.indices[static_cast<size_t>(j)]);
    const Vec& comp = components[static_cast<size_t>(j)];
    if (comp.size() != f.dim())
      throw ValidationError("product_vector: component " + std::to_string(j) +
                            " has wrong dimension for factor '" +
                            f.algebra()->label() + "'");
    if (std::abs(comp[0]) > tol.norm * std::max(1.0, comp.norm()))
      throw ValidationError("product_vector: component " + std::to_string(j) +
                            " has a vacuum part; it must lie in the complement H°");
    Vec tail = comp.segment(1, f.complement_dim());
    Vec next(block.size() * tail.size());
    for (long a = 0; a < block.size(); ++a)
      next.segment(a * tail.size(), tail.size()) = block[a] * tail;
    block = std::move(next);
  }

  Vec out = Vec::Zero(total_dim_);
  out.segment(offsets_[static_cast<size_t>(wi)], sizes_[static_cast<size_t>(wi)]) = block;
  return out;
}

SummandProjection::SummandProjection(FockPtr space, const Word& w) : space_(std::move(space)), word_(w) {
  int wi = space_->find_word(w);
  if (wi < 0) throw StructuralError("projection: word not in this space");
  offset_ = space_->offset(wi);
  size_ = space_->block_size(wi);
}

Vec SummandProjection::apply(const Vec& v) const {
  Vec out = Vec::Zero(space_->total_dim());
  out.segment(offset_, size_) = v.segment(offset_, size_);
  return out;
}

SpMat SummandProjection::matrix() const {
  SpMat p(space_->total_dim(), space_->total_dim());
  std::vector<Eigen::Triplet<Cplx>> trips;
  for (long k = 0; k < size_; ++k) trips.emplace_back(offset_ + k, offset_ + k, 1.0);
  p.setFromTriplets(trips.begin(), trips.end());
  return p;
}

SummandProjection projection(FockPtr space, const Word& w) {
  return SummandProjection(std::move(space), w);
}

}  // namespace freeprod
