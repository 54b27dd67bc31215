#include "freeprod/oracle.hpp"

#include <map>

namespace freeprod {

namespace {

constexpr long kDenseCap = 5000;

void grow_words(std::vector<Word>& out, std::vector<int>& cur, int num_factors,
                int depth) {
  out.push_back(Word{cur});
  if (static_cast<int>(cur.size()) >= depth) return;
  for (int i = 0; i < num_factors; ++i) {
    if (!cur.empty() && cur.back() == i) continue;
    cur.push_back(i);
    grow_words(out, cur, num_factors, depth);
    cur.pop_back();
  }
}

}  // namespace

DenseSpace::DenseSpace(std::vector<GnsPtr> factors, int depth)
    : factors_(std::move(factors)), depth_(depth) {
  if (depth_ < 1) throw StructuralError("dense space: depth must be >= 1");
  for (const auto& f : factors_)
    if (f->complement_dim() < 1)
      throw ValidationError("dense space: factors must be larger than the scalars");

  std::vector<int> cur;
  grow_words(words_, cur, static_cast<int>(factors_.size()), depth_);

  offsets_.resize(words_.size());
  sizes_.resize(words_.size());
  long off = 0;
  for (size_t wi = 0; wi < words_.size(); ++wi) {
    long size = 1;
    for (int i : words_[wi].indices)
      size *= factors_[static_cast<size_t>(i)]->complement_dim();
    offsets_[wi] = off;
    sizes_[wi] = size;
    off += size;
  }
  total_dim_ = off;
  if (total_dim_ > kDenseCap)
    throw ValidationError("dense oracle limited to total dimension " +
                          std::to_string(kDenseCap));

  basis_.resize(static_cast<size_t>(total_dim_));
  for (size_t wi = 0; wi < words_.size(); ++wi) {
    const Word& w = words_[wi];
    std::vector<int> multi(static_cast<size_t>(w.length()), 0);
    for (long t = 0; t < sizes_[wi]; ++t) {
      long rem = t;
      for (int j = w.length() - 1; j >= 0; --j) {
        int c = factors_[static_cast<size_t>(w.indices[static_cast<size_t>(j)])]->complement_dim();
        multi[static_cast<size_t>(j)] = static_cast<int>(rem % c);
        rem /= c;
      }
      basis_[static_cast<size_t>(offsets_[wi] + t)] = Basis{static_cast<int>(wi), multi};
    }
  }
}

long DenseSpace::index_of(int word_index, const std::vector<int>& multi) const {
  const Word& w = words_[static_cast<size_t>(word_index)];
  long flat = 0;
  for (int j = 0; j < w.length(); ++j) {
    int c = factors_[static_cast<size_t>(w.indices[static_cast<size_t>(j)])]->complement_dim();
    flat = flat * c + multi[static_cast<size_t>(j)];
  }
  return offsets_[static_cast<size_t>(word_index)] + flat;
}

std::vector<long> DenseSpace::permutation_to(const FreeFockSpace& main) const {
  if (main.total_dim() != total_dim_)
    throw StructuralError("permutation_to: dimension mismatch");
  std::vector<long> perm(static_cast<size_t>(total_dim_));
  for (long o = 0; o < total_dim_; ++o) {
    const Basis& b = basis_[static_cast<size_t>(o)];
    const int mwi = main.find_word(words_[static_cast<size_t>(b.word_index)]);
    if (mwi < 0) throw StructuralError("permutation_to: word missing in main space");
    long flat = 0;
    const Word& w = words_[static_cast<size_t>(b.word_index)];
    for (int j = 0; j < w.length(); ++j) {
      int c = factors_[static_cast<size_t>(w.indices[static_cast<size_t>(j)])]->complement_dim();
      flat = flat * c + b.multi[static_cast<size_t>(j)];
    }
    perm[static_cast<size_t>(o)] = main.offset(mwi) + flat;
  }
  return perm;
}

Mat DenseSpace::factor_rep(int factor, const AlgebraElement& a) const {
  // Entries phi(r_l* a r_k) over the frame representatives: pure state
  // arithmetic, no shared representation code.
  const GnsSpace& g = *factors_[static_cast<size_t>(factor)];
  const int d = g.dim();
  Mat rep(d, d);
  std::vector<AlgebraElement> reps;
  for (int i = 0; i < d; ++i) reps.push_back(g.frame_element(i));
  for (int l = 0; l < d; ++l)
    for (int kk = 0; kk < d; ++kk)
      rep(l, kk) =
          state_eval(g.state(), multiply(adjoint(reps[static_cast<size_t>(l)]),
                                         multiply(a, reps[static_cast<size_t>(kk)])));
  return rep;
}

Mat DenseSpace::dense_represent(int factor, const AlgebraElement& a) const {
  if (factor < 0 || factor >= static_cast<int>(factors_.size()))
    throw StructuralError("dense_represent: unknown factor");
  const Mat rep = factor_rep(factor, a);
  const int c = factors_[static_cast<size_t>(factor)]->complement_dim();

  Mat out = Mat::Zero(total_dim_, total_dim_);
  for (long col = 0; col < total_dim_; ++col) {
    const Basis& b = basis_[static_cast<size_t>(col)];
    const Word& w = words_[static_cast<size_t>(b.word_index)];

    if (w.length() > 0 && w.indices.front() == factor) {
      // a acts on the first tensor slot: a e_{1+i0} has frame coordinates
      // rep.col(1+i0); the vacuum coordinate shortens the word.
      const Vec u = rep.col(1 + b.multi.front());
      std::vector<int> tail_multi(b.multi.begin() + 1, b.multi.end());
      std::vector<int> tail_word(w.indices.begin() + 1, w.indices.end());
      int twi = -1;
      for (size_t wi = 0; wi < words_.size(); ++wi)
        if (words_[wi].indices == tail_word) { twi = static_cast<int>(wi); break; }
      out(index_of(twi, tail_multi), col) += u[0];
      std::vector<int> same = b.multi;
      for (int r = 0; r < c; ++r) {
        same.front() = r;
        out(index_of(b.word_index, same), col) += u[1 + r];
      }
    } else {
      // a xi = phi(a) xi + (a xi)°: scalar part keeps the word, the
      // complement part prepends a letter (dropped beyond the depth).
      const Vec u = rep.col(0);
      out(col, col) += u[0];
      if (w.length() < depth_) {
        std::vector<int> ext_word;
        ext_word.push_back(factor);
        ext_word.insert(ext_word.end(), w.indices.begin(), w.indices.end());
        int ewi = -1;
        for (size_t wi = 0; wi < words_.size(); ++wi)
          if (words_[wi].indices == ext_word) { ewi = static_cast<int>(wi); break; }
        std::vector<int> ext_multi(1, 0);
        ext_multi.insert(ext_multi.end(), b.multi.begin(), b.multi.end());
        for (int r = 0; r < c; ++r) {
          ext_multi.front() = r;
          out(index_of(ewi, ext_multi), col) += u[1 + r];
        }
      }
    }
  }
  return out;
}

Mat DenseSpace::dense_poly(const NCPoly& p) const {
  Mat acc = Mat::Zero(total_dim_, total_dim_);
  for (const auto& term : p.terms()) {
    Mat prod = Mat::Identity(total_dim_, total_dim_);
    for (const Letter& l : term.word) prod = prod * dense_represent(l.factor, l.elem);
    acc += term.coeff * prod;
  }
  return acc;
}

Cplx DenseSpace::dense_moment(const NCPoly& p) const {
  if (p.degree() > depth_)
    throw ExactnessError("dense_moment: degree exceeds the depth", p.degree());
  return dense_poly(p)(0, 0);
}

Cplx DenseSpace::dense_expectation(const NCPoly& p, long oracle_index) const {
  return dense_poly(p)(oracle_index, oracle_index);
}

Mat DenseSpace::dense_isometry(const std::vector<ZetaVector>& zetas,
                               int target_factor) const {
  const GnsSpace& target = *factors_[static_cast<size_t>(target_factor)];
  const int n = static_cast<int>(zetas.size()) + 1;
  if (n > depth_) throw StructuralError("dense_isometry: pattern exceeds depth");

  // Naive kron of complement parts, then placement by word lookup.
  auto place = [&](const std::vector<int>& word_idx, const std::vector<Vec>& comps) {
    Vec block = Vec::Ones(1);
    for (size_t j = 0; j < comps.size(); ++j) {
      const Vec tail = comps[j].segment(1, comps[j].size() - 1);
      Vec next(block.size() * tail.size());
      for (long x = 0; x < block.size(); ++x)
        for (long y = 0; y < tail.size(); ++y) next[x * tail.size() + y] = block[x] * tail[y];
      block = std::move(next);
    }
    int wi = -1;
    for (size_t w = 0; w < words_.size(); ++w)
      if (words_[w].indices == word_idx) { wi = static_cast<int>(w); break; }
    if (wi < 0) throw StructuralError("dense_isometry: word not found");
    Vec out = Vec::Zero(total_dim_);
    out.segment(offsets_[static_cast<size_t>(wi)], sizes_[static_cast<size_t>(wi)]) = block;
    return out;
  };

  std::vector<int> head;
  std::vector<Vec> head_comps;
  for (const auto& z : zetas) {
    head.push_back(z.factor);
    head_comps.push_back(z.coords);
  }

  Mat V = Mat::Zero(total_dim_, target.dim());
  V.col(0) = place(head, head_comps);
  std::vector<int> full = head;
  full.push_back(target_factor);
  for (int j = 1; j < target.dim(); ++j) {
    std::vector<Vec> comps = head_comps;
    Vec e = Vec::Zero(target.dim());
    e[j] = 1.0;
    comps.push_back(std::move(e));
    V.col(j) = place(full, comps);
  }
  return V;
}

Mat DenseSpace::dense_compress(const std::vector<ZetaVector>& zetas, int target_factor,
                               const std::vector<Letter>& letters) const {
  Mat V = dense_isometry(zetas, target_factor);
  Mat prod = Mat::Identity(total_dim_, total_dim_);
  for (const Letter& l : letters) prod = prod * dense_represent(l.factor, l.elem);
  return V.adjoint() * prod * V;
}

namespace {

int random_factor(SplitMix64& rng, int num_factors, int avoid) {
  int f = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_factors)));
  while (f == avoid) f = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_factors)));
  return f;
}

Vec random_complement_unit(const GnsSpace& g, SplitMix64& rng) {
  Vec v = Vec::Zero(g.dim());
  for (int i = 1; i < g.dim(); ++i) v[i] = rng.gaussian();
  double n = v.norm();
  if (n < 1e-12) {
    v[1] = 1.0;
    n = 1.0;
  }
  return v / n;
}

AlgebraElement random_centered(const GnsSpace& g, SplitMix64& rng) {
  std::vector<Mat> blocks;
  for (int d : g.algebra()->block_dims()) {
    Mat m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = rng.gaussian();
    blocks.push_back(std::move(m));
  }
  return center(AlgebraElement(g.algebra(), std::move(blocks)), g.state());
}

}  // namespace

LemmaSuiteReport lemma_suite(FockPtr space, int instances, int max_n,
                             std::uint64_t seed, const Tolerances& tol) {
  const int num_factors = space->num_factors();
  if (num_factors < 2)
    throw ValidationError("lemma suite needs at least two factors");
  max_n = std::min(max_n, space->depth());
  if (max_n < 1) throw StructuralError("lemma suite: max_n must be >= 1");

  DenseSpace oracle(
      [&] {
        std::vector<GnsPtr> fs;
        for (int i = 0; i < num_factors; ++i) fs.push_back(space->factor_ptr(i));
        return fs;
      }(),
      space->depth());

  LemmaSuiteReport report;
  report.instances = instances;
  SplitMix64 base(seed);

  for (int inst = 0; inst < instances; ++inst) {
    SplitMix64 rng = base.split(static_cast<std::uint64_t>(inst));
    const int want_branch = inst % 3;
    int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_n)));
    if (want_branch == 1 && n < 2) n = std::min(2, max_n);
    if (want_branch == 1 && n < 2) continue;  // depth 1: no identity branch

    std::vector<int> iotas(static_cast<size_t>(n));
    iotas[0] = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_factors)));
    for (int j = 1; j < n; ++j)
      iotas[static_cast<size_t>(j)] =
          random_factor(rng, num_factors, iotas[static_cast<size_t>(j - 1)]);

    std::vector<ZetaVector> zetas;
    for (int j = 0; j + 1 < n; ++j)
      zetas.push_back(
          ZetaVector{iotas[static_cast<size_t>(j)],
                     random_complement_unit(space->factor(iotas[static_cast<size_t>(j)]), rng)});

    CompressionIsometry V = build_isometry(space, zetas, iotas.back(), tol);
    report.max_isometry_residual =
        std::max(report.max_isometry_residual,
                 (V.matrix().adjoint() * V.matrix() -
                  Mat::Identity(V.matrix().cols(), V.matrix().cols()))
                     .norm());

    std::vector<int> kpat;
    if (want_branch == 0) {
      // Full mirror: m = 2n - 1, the target letter in the middle.
      for (int j = 1; j <= n; ++j) kpat.push_back(iotas[static_cast<size_t>(j - 1)]);
      for (int j = n - 1; j >= 1; --j) kpat.push_back(iotas[static_cast<size_t>(j - 1)]);
    } else if (want_branch == 1) {
      // Shorter mirror: m = 2p - 1 with 1 <= p < n.
      const int p = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      for (int j = 1; j <= p; ++j) kpat.push_back(iotas[static_cast<size_t>(j - 1)]);
      for (int j = p - 1; j >= 1; --j) kpat.push_back(iotas[static_cast<size_t>(j - 1)]);
    } else if (inst % 2 == 0 || n == 1) {
      // Spoiled head: k_1 != i_1 kills the compression.
      const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n - 1)));
      kpat.resize(static_cast<size_t>(m));
      kpat[0] = random_factor(rng, num_factors, iotas[0]);
      for (int j = 1; j < m; ++j)
        kpat[static_cast<size_t>(j)] =
            random_factor(rng, num_factors, kpat[static_cast<size_t>(j - 1)]);
    } else {
      // Even length: only odd mirrors survive.
      for (int j = 1; j <= n; ++j) kpat.push_back(iotas[static_cast<size_t>(j - 1)]);
      for (int j = n - 1; j >= 2; --j) kpat.push_back(iotas[static_cast<size_t>(j - 1)]);
    }

    std::vector<Letter> letters;
    for (int f : kpat)
      letters.push_back(Letter{f, random_centered(space->factor(f), rng)});

    const LemmaCase value = lemma_value(V, letters, tol);
    const Mat direct = oracle.dense_compress(zetas, iotas.back(), letters);

    RepOperator T = RepOperator::identity(space);
    for (const Letter& l : letters) T = T * represent(space, l.factor, l.elem);
    report.max_main_vs_oracle =
        std::max(report.max_main_vs_oracle, (compress(V, T) - direct).norm());

    const GnsSpace& g = space->factor(iotas.back());
    switch (value.classification.branch) {
      case LemmaBranch::ScalarTarget: {
        ++report.scalar_target;
        const Mat expected = value.scalar * g.rep(*value.target_elem);
        report.max_closed_form_residual =
            std::max(report.max_closed_form_residual, (direct - expected).norm());
        break;
      }
      case LemmaBranch::ScalarIdentity: {
        ++report.scalar_identity;
        const Mat expected = value.scalar * Mat::Identity(g.dim(), g.dim());
        report.max_closed_form_residual =
            std::max(report.max_closed_form_residual, (direct - expected).norm());
        break;
      }
      case LemmaBranch::Zero:
        ++report.zero_cases;
        report.max_zero_branch_norm =
            std::max(report.max_zero_branch_norm, direct.norm());
        break;
    }
  }

  report.pass = report.max_closed_form_residual < 1e-10 &&
                report.max_zero_branch_norm < 1e-10 &&
                report.max_main_vs_oracle < 1e-10 &&
                report.max_isometry_residual < 1e-12 && report.scalar_identity > 0 &&
                report.scalar_target > 0 && report.zero_cases > 0;
  return report;
}

}  // namespace freeprod
