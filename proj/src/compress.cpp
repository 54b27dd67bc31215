#include "freeprod/compress.hpp"

#include <algorithm>
#include <sstream>

namespace freeprod {

const char* to_string(LemmaBranch b) {
  switch (b) {
    case LemmaBranch::ScalarIdentity: return "scalar_identity";
    case LemmaBranch::ScalarTarget: return "scalar_target";
    case LemmaBranch::Zero: return "zero";
  }
  return "?";
}

CompressionIsometry build_isometry(FockPtr space, const std::vector<ZetaVector>& zetas,
                                   int target_factor, const Tolerances& tol) {
  const int n = static_cast<int>(zetas.size()) + 1;
  if (n > space->depth())
    throw StructuralError("build_isometry: pattern length exceeds the depth");
  if (target_factor < 0 || target_factor >= space->num_factors())
    throw StructuralError("build_isometry: unknown target factor");

  std::vector<int> pattern;
  for (const auto& z : zetas) pattern.push_back(z.factor);
  pattern.push_back(target_factor);
  for (size_t j = 0; j + 1 < pattern.size(); ++j)
    if (pattern[j] == pattern[j + 1])
      throw StructuralError("build_isometry: factor pattern must alternate");

  std::vector<Vec> coords;
  for (size_t j = 0; j < zetas.size(); ++j) {
    const GnsSpace& f = space->factor(zetas[j].factor);
    const Vec& z = zetas[j].coords;
    if (z.size() != f.dim())
      throw ValidationError("build_isometry: zeta " + std::to_string(j) +
                            " has wrong dimension");
    if (std::abs(z[0]) > tol.norm)
      throw ValidationError("build_isometry: zeta " + std::to_string(j) +
                            " has a vacuum component; it must lie in H°");
    double nrm = z.norm();
    if (std::abs(nrm - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "build_isometry: zeta " << j << " has norm " << nrm
          << "; pass unit vectors (divide by the norm first)";
      throw ValidationError(msg.str());
    }
    coords.push_back(z);
  }

  const GnsSpace& target = space->factor(target_factor);
  CompressionIsometry V;
  V.space_ = space;
  V.pattern_ = pattern;
  V.zetas_ = coords;
  V.matrix_ = Mat::Zero(space->total_dim(), target.dim());

  Word head{std::vector<int>(pattern.begin(), pattern.end() - 1)};
  if (head.length() == 0) {
    V.matrix_.col(0) = space->vacuum_vector();
  } else {
    V.matrix_.col(0) = space->product_vector(head, coords, tol);
  }
  Word full{pattern};
  for (int j = 1; j < target.dim(); ++j) {
    std::vector<Vec> comps = coords;
    Vec e = Vec::Zero(target.dim());
    e[j] = 1.0;
    comps.push_back(std::move(e));
    V.matrix_.col(j) = space->product_vector(full, comps, tol);
  }
  return V;
}

LemmaClassification classify(const std::vector<int>& isometry_pattern,
                             const std::vector<int>& letter_pattern) {
  const int n = static_cast<int>(isometry_pattern.size());
  const int m = static_cast<int>(letter_pattern.size());
  if (n < 1 || m < 1) throw StructuralError("classify: empty pattern");
  for (int j = 0; j + 1 < n; ++j)
    if (isometry_pattern[j] == isometry_pattern[j + 1])
      throw StructuralError("classify: isometry pattern must alternate");
  for (int j = 0; j + 1 < m; ++j)
    if (letter_pattern[j] == letter_pattern[j + 1])
      throw StructuralError("classify: letter pattern must alternate");

  auto iota = [&](int j) { return isometry_pattern[j - 1]; };  // 1-based
  auto k = [&](int j) { return letter_pattern[j - 1]; };

  if (m % 2 == 1) {
    const int p = (m + 1) / 2;
    if (p <= n) {
      bool mirror = k(p) == iota(p);
      for (int j = 1; mirror && j <= p - 1; ++j)
        mirror = (k(j) == iota(j)) && (k(m + 1 - j) == iota(j));
      if (mirror) {
        if (p == n) return {LemmaBranch::ScalarTarget, n};
        return {LemmaBranch::ScalarIdentity, p};
      }
    }
  }
  return {LemmaBranch::Zero, 0};
}

namespace {

void validate_lemma_letters(const CompressionIsometry& V,
                            const std::vector<Letter>& letters,
                            const Tolerances& tol) {
  if (letters.empty()) throw StructuralError("lemma_value: no letters");
  const FreeFockSpace& space = *V.space();
  for (size_t j = 0; j < letters.size(); ++j) {
    const int f = letters[j].factor;
    if (f < 0 || f >= space.num_factors())
      throw StructuralError("lemma_value: letter references unknown factor");
    const GnsSpace& g = space.factor(f);
    if (!letters[j].elem.parent()->same_as(*g.algebra()))
      throw StructuralError("lemma_value: letter element in wrong algebra");
    const Cplx phi = state_eval(g.state(), letters[j].elem);
    if (std::abs(phi) > tol.norm * std::max(1.0, letters[j].elem.frobenius_norm()))
      throw ValidationError("lemma_value: letter " + std::to_string(j) +
                            " is not centered (phi(a) = " + std::to_string(std::abs(phi)) +
                            ")");
  }
}

}  // namespace

LemmaCase lemma_value(const CompressionIsometry& V, const std::vector<Letter>& letters,
                      const Tolerances& tol) {
  validate_lemma_letters(V, letters, tol);
  std::vector<int> k_pattern;
  for (const Letter& l : letters) k_pattern.push_back(l.factor);
  const auto cls = classify(V.pattern(), k_pattern);

  LemmaCase out;
  out.classification = cls;
  if (cls.branch == LemmaBranch::Zero) return out;

  const FreeFockSpace& space = *V.space();
  const int m = static_cast<int>(letters.size());
  const int p = cls.p;  // ScalarTarget: p == n

  // Descending outer pairings: <a_{m+1-j} zeta_j, xi> and <a_j xi, zeta_j>
  // for j = 1..p-1.
  Cplx c = 1.0;
  for (int j = 1; j <= p - 1; ++j) {
    const Vec& zeta = V.zetas()[static_cast<size_t>(j - 1)];
    const GnsSpace& g = space.factor(V.pattern()[static_cast<size_t>(j - 1)]);
    c *= g.pair_with_vacuum(letters[static_cast<size_t>(m - j)].elem, zeta);
    c *= g.vacuum_against(letters[static_cast<size_t>(j - 1)].elem, zeta);
  }

  if (cls.branch == LemmaBranch::ScalarIdentity) {
    // Middle factor <a_p zeta_p, zeta_p>.
    const Vec& zp = V.zetas()[static_cast<size_t>(p - 1)];
    const GnsSpace& g = space.factor(V.pattern()[static_cast<size_t>(p - 1)]);
    c *= zp.dot(g.rep(letters[static_cast<size_t>(p - 1)].elem) * zp);
    out.scalar = c;
  } else {
    out.scalar = c;
    out.target_elem = letters[static_cast<size_t>(p - 1)].elem;
  }
  return out;
}

Mat compress(const CompressionIsometry& V, const RepOperator& T) {
  if (T.space.get() != V.space().get())
    throw StructuralError("compress: operator lives on a different space");
  return V.matrix().adjoint() * (T.matrix * V.matrix());
}

namespace {

// Pick the centered basis element of factor `f` maximizing |pairing(zeta)|.
// The pairing cannot vanish for every basis element because the class of 1
// is cyclic, so an empty result is a genuine internal failure.
AlgebraElement best_pairing(const GnsSpace& g,
                            const std::function<Cplx(const AlgebraElement&)>& pairing) {
  double best = -1.0;
  std::optional<AlgebraElement> pick;
  for (const auto& b : standard_basis(g.algebra())) {
    AlgebraElement cb = center(b, g.state());
    double v = std::abs(pairing(cb));
    if (v > best) {
      best = v;
      pick = cb;
    }
  }
  if (!pick || best < 1e-12)
    throw ValidationError(
        "witness construction failed: every centered basis pairing vanishes");
  return *pick;
}

}  // namespace

VavReport vav_surjectivity(const CompressionIsometry& V, SplitMix64 rng,
                           int random_words, const Tolerances& tol) {
  const FockPtr& space = V.space();
  const int n = V.n();
  const int N = space->depth();
  if (2 * n - 1 > N)
    throw ExactnessError("vav_surjectivity needs depth >= 2n-1 for exact products",
                         2 * n - 1);

  const int target = V.target_factor();
  const GnsSpace& g = space->factor(target);

  VavReport report;
  report.n = n;

  // Companions a_j, a_{2n-j} in factor i_j with nonvanishing vacuum pairings.
  std::vector<AlgebraElement> ascending;   // a_j, j = 1..n-1
  std::vector<AlgebraElement> descending;  // a_{2n-j}, j = 1..n-1
  for (int j = 1; j <= n - 1; ++j) {
    const GnsSpace& gj = space->factor(V.pattern()[static_cast<size_t>(j - 1)]);
    const Vec& zeta = V.zetas()[static_cast<size_t>(j - 1)];
    ascending.push_back(best_pairing(
        gj, [&](const AlgebraElement& a) { return gj.vacuum_against(a, zeta); }));
    descending.push_back(best_pairing(
        gj, [&](const AlgebraElement& a) { return gj.pair_with_vacuum(a, zeta); }));
  }

  // Recovery of every centered basis element of the target factor.
  for (const auto& b : standard_basis(g.algebra())) {
    AlgebraElement bc = center(b, g.state());
    if (bc.frobenius_norm() < 1e-14) continue;

    std::vector<Letter> letters;
    Cplx c = 1.0;
    for (int j = 1; j <= n - 1; ++j) {
      const int f = V.pattern()[static_cast<size_t>(j - 1)];
      const GnsSpace& gj = space->factor(f);
      const Vec& zeta = V.zetas()[static_cast<size_t>(j - 1)];
      letters.push_back(Letter{f, ascending[static_cast<size_t>(j - 1)]});
      c *= gj.vacuum_against(ascending[static_cast<size_t>(j - 1)], zeta);
      c *= gj.pair_with_vacuum(descending[static_cast<size_t>(j - 1)], zeta);
    }
    letters.push_back(Letter{target, bc});
    for (int j = n - 1; j >= 1; --j)
      letters.push_back(
          Letter{V.pattern()[static_cast<size_t>(j - 1)], descending[static_cast<size_t>(j - 1)]});

    RepOperator T = RepOperator::identity(space);
    for (const Letter& l : letters) T = T * represent(space, l.factor, l.elem);
    Mat M = compress(V, T);
    double resid = (M / c - g.rep(bc)).norm();
    report.max_recovery_residual = std::max(report.max_recovery_residual, resid);
    ++report.basis_recovered;
  }

  // Containment: compressions of random represented words must stay in the
  // span of the target factor's represented algebra (least-squares distance).
  const auto basis = standard_basis(g.algebra());
  Mat span(g.dim() * g.dim(), basis.size());
  for (size_t bi = 0; bi < basis.size(); ++bi) {
    Mat r = g.rep(basis[bi]);
    span.col(bi) = Eigen::Map<Vec>(r.data(), r.size());
  }
  Eigen::ColPivHouseholderQR<Mat> qr(span);

  const int max_len = std::max(1, N - n);
  for (int t = 0; t < random_words; ++t) {
    const int len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len)));
    RepOperator T = RepOperator::identity(space);
    int prev = -1;
    for (int j = 0; j < len; ++j) {
      int f = static_cast<int>(rng.below(static_cast<std::uint64_t>(space->num_factors())));
      while (f == prev)
        f = static_cast<int>(rng.below(static_cast<std::uint64_t>(space->num_factors())));
      prev = f;
      const auto alg = space->factor(f).algebra();
      std::vector<Mat> blocks;
      for (int d : alg->block_dims()) {
        Mat m(d, d);
        for (int r = 0; r < d; ++r)
          for (int s = 0; s < d; ++s) m(r, s) = rng.gaussian();
        blocks.push_back(std::move(m));
      }
      T = T * represent(space, f, AlgebraElement(alg, std::move(blocks)));
    }
    Mat M = compress(V, T);
    Vec rhs = Eigen::Map<Vec>(M.data(), M.size());
    Vec sol = qr.solve(rhs);
    double resid = (span * sol - rhs).norm() / std::max(1.0, rhs.norm());
    report.max_containment_residual = std::max(report.max_containment_residual, resid);
    ++report.words_checked;
  }
  return report;
}

namespace {

double operator_norm_estimate(const SpMat& m, int iterations = 60) {
  if (m.nonZeros() == 0) return 0.0;
  Vec v = Vec::Ones(m.rows());
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vec w = m.adjoint() * (m * v);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    lambda = nw;
    v = w / nw;
  }
  return std::sqrt(lambda);
}

}  // namespace

WitnessRecord scan_positive_diagonal(FockPtr space, const SpMat& op_matrix,
                                     int operator_degree, const Tolerances& tol) {
  WitnessRecord rec;
  rec.scale = operator_norm_estimate(op_matrix);
  const int max_len = space->depth() - operator_degree;
  if (max_len < 0)
    throw ExactnessError("diagonal scan has no exact word lengths at this depth",
                         operator_degree);
  const double threshold = tol.pos * std::max(rec.scale, 1e-300);

  for (int wi = 0; wi < space->word_count() && !rec.found; ++wi) {
    if (space->word(wi).length() > max_len) continue;
    const long off = space->offset(wi);
    const long size = space->block_size(wi);
    for (long t = 0; t < size; ++t) {
      const double val = op_matrix.coeff(off + t, off + t).real();
      ++rec.scanned;
      rec.max_scanned = std::max(rec.max_scanned, val);
      if (val > threshold) {
        rec.found = true;
        rec.word = space->word(wi);
        rec.coordinate = off + t;
        rec.value = val;
        break;
      }
    }
  }
  return rec;
}

WitnessRecord faithfulness_witness(FockPtr space, const NCPoly& x,
                                   const Tolerances& tol) {
  const NCPoly a = x.adjoint() * x;
  const int d = a.degree();
  if (d > space->depth())
    throw ExactnessError("faithfulness_witness: x*x exceeds the exact degree range",
                         d);
  RepOperator T = represent_poly(space, a);
  WitnessRecord rec = scan_positive_diagonal(space, T.matrix, d, tol);

  if (rec.found && rec.word.length() >= 1) {
    // Recompute <a (zeta_1 x..x zeta_{n-1}), same> two ways: through the
    // compression built from the witness components, and directly.
    const Word& w = rec.word;
    const int n = w.length();
    long local = rec.coordinate - space->offset(space->find_word(w));
    std::vector<int> multi(static_cast<size_t>(n));
    for (int j = n - 1; j >= 0; --j) {
      const int c = space->factor(w.indices[static_cast<size_t>(j)]).complement_dim();
      multi[static_cast<size_t>(j)] = static_cast<int>(local % c);
      local /= c;
    }
    std::vector<ZetaVector> zetas;
    for (int j = 0; j < n - 1; ++j) {
      const GnsSpace& g = space->factor(w.indices[static_cast<size_t>(j)]);
      Vec e = Vec::Zero(g.dim());
      e[1 + multi[static_cast<size_t>(j)]] = 1.0;
      zetas.push_back(ZetaVector{w.indices[static_cast<size_t>(j)], std::move(e)});
    }
    CompressionIsometry V =
        build_isometry(space, zetas, w.indices[static_cast<size_t>(n - 1)], tol);
    Mat compressed = compress(V, T);
    rec.chain_compressed = compressed(0, 0).real();

    Vec u;
    if (n == 1) {
      u = space->vacuum_vector();
    } else {
      std::vector<Vec> comps;
      for (const auto& z : zetas) comps.push_back(z.coords);
      Word head{std::vector<int>(w.indices.begin(), w.indices.end() - 1)};
      u = space->product_vector(head, comps, tol);
    }
    rec.chain_direct = u.dot(apply_poly(*space, a, u)).real();
    rec.chain_checked = true;
  }
  return rec;
}

}  // namespace freeprod
