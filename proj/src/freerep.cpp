#include "freeprod/freerep.hpp"

#include <algorithm>
#include <sstream>

namespace freeprod {

int NCPoly::degree() const {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, static_cast<int>(t.word.size()));
  return d;
}

NCPoly NCPoly::adjoint() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    Term s;
    s.coeff = std::conj(t.coeff);
    for (auto it = t.word.rbegin(); it != t.word.rend(); ++it)
      s.word.push_back(Letter{it->factor, freeprod::adjoint(it->elem)});
    out.push_back(std::move(s));
  }
  return NCPoly(std::move(out));
}

NCPoly NCPoly::operator*(const NCPoly& rhs) const {
  std::vector<Term> out;
  out.reserve(terms_.size() * rhs.terms_.size());
  for (const Term& a : terms_) {
    for (const Term& b : rhs.terms_) {
      Term t;
      t.coeff = a.coeff * b.coeff;
      t.word = a.word;
      t.word.insert(t.word.end(), b.word.begin(), b.word.end());
      out.push_back(std::move(t));
    }
  }
  return NCPoly(std::move(out));
}

NCPoly NCPoly::operator+(const NCPoly& rhs) const {
  std::vector<Term> out = terms_;
  out.insert(out.end(), rhs.terms_.begin(), rhs.terms_.end());
  return NCPoly(std::move(out));
}

NCPoly NCPoly::operator*(Cplx scalar) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.coeff *= scalar;
  return NCPoly(std::move(out));
}

namespace {

void validate_letter(const FreeFockSpace& space, int factor, const AlgebraElement& a) {
  if (factor < 0 || factor >= space.num_factors())
    throw StructuralError("letter references unknown factor index " +
                          std::to_string(factor));
  if (!a.parent()->same_as(*space.factor(factor).algebra()))
    throw StructuralError("letter element does not belong to factor '" +
                          space.factor(factor).algebra()->label() + "'");
}

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowMajorMutMap =
    Eigen::Map<Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

}  // namespace

Vec apply_letter(const FreeFockSpace& space, int factor, const AlgebraElement& a,
                 const Vec& v) {
  validate_letter(space, factor, a);
  if (v.size() != space.total_dim())
    throw StructuralError("apply_letter: vector has wrong dimension");

  const Mat rep = space.factor(factor).rep(a);
  const int c = space.factor(factor).complement_dim();
  const Cplx scalar_part = rep(0, 0);               // phi(a)
  const Mat core = rep.block(1, 1, c, c);           // H° -> H° part
  const Mat col = rep.block(1, 0, c, 1);            // (a xi)° components
  const Mat row = rep.block(0, 1, 1, c);            // <a zeta_j, xi> row

  Vec out = Vec::Zero(space.total_dim());
  for (int wi = 0; wi < space.word_count(); ++wi) {
    const long off = space.offset(wi);
    const long size = space.block_size(wi);
    const Word& w = space.word(wi);
    if (v.segment(off, size).isZero(0.0)) continue;

    if (w.length() > 0 && w.indices.front() == factor) {
      // First-slot action: centered part stays, vacuum part shortens.
      const long rest = size / c;
      RowMajorMap block(v.data() + off, c, rest);
      RowMajorMutMap stay(out.data() + off, c, rest);
      stay += core * block;
      const int ti = space.tail_index(wi);
      out.segment(space.offset(ti), rest) += (row * block).transpose();
    } else {
      // Different leading factor (or vacuum): scalar part plus lengthening.
      out.segment(off, size) += scalar_part * v.segment(off, size);
      const int ei = space.extend_index(wi, factor);
      if (ei >= 0) {
        const long eoff = space.offset(ei);
        for (int r = 0; r < c; ++r)
          out.segment(eoff + r * size, size) += col(r, 0) * v.segment(off, size);
      }
      // ei < 0: the lengthening component exceeds the depth and is dropped.
    }
  }
  return out;
}

RepOperator represent(FockPtr space, int factor, const AlgebraElement& a) {
  validate_letter(*space, factor, a);
  const Mat rep = space->factor(factor).rep(a);
  const int c = space->factor(factor).complement_dim();

  std::vector<Eigen::Triplet<Cplx>> trips;
  for (int wi = 0; wi < space->word_count(); ++wi) {
    const long off = space->offset(wi);
    const long size = space->block_size(wi);
    const Word& w = space->word(wi);

    if (w.length() > 0 && w.indices.front() == factor) {
      const long rest = size / c;
      for (int r = 0; r < c; ++r)
        for (int s = 0; s < c; ++s)
          if (rep(1 + r, 1 + s) != Cplx(0.0))
            for (long t = 0; t < rest; ++t)
              trips.emplace_back(off + r * rest + t, off + s * rest + t,
                                 rep(1 + r, 1 + s));
      const long toff = space->offset(space->tail_index(wi));
      for (int s = 0; s < c; ++s)
        if (rep(0, 1 + s) != Cplx(0.0))
          for (long t = 0; t < rest; ++t)
            trips.emplace_back(toff + t, off + s * rest + t, rep(0, 1 + s));
    } else {
      if (rep(0, 0) != Cplx(0.0))
        for (long t = 0; t < size; ++t)
          trips.emplace_back(off + t, off + t, rep(0, 0));
      const int ei = space->extend_index(wi, factor);
      if (ei >= 0) {
        const long eoff = space->offset(ei);
        for (int r = 0; r < c; ++r)
          if (rep(1 + r, 0) != Cplx(0.0))
            for (long t = 0; t < size; ++t)
              trips.emplace_back(eoff + r * size + t, off + t, rep(1 + r, 0));
      }
    }
  }

  RepOperator op;
  op.space = std::move(space);
  op.matrix = SpMat(op.space->total_dim(), op.space->total_dim());
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  op.exact_in_degree = 1;
  return op;
}

RepOperator RepOperator::identity(FockPtr space) {
  RepOperator op;
  op.matrix = SpMat(space->total_dim(), space->total_dim());
  op.matrix.setIdentity();
  op.space = std::move(space);
  op.exact_in_degree = 0;
  return op;
}

RepOperator RepOperator::adjoint() const {
  RepOperator op;
  op.space = space;
  op.matrix = matrix.adjoint();
  op.exact_in_degree = exact_in_degree;
  return op;
}

RepOperator RepOperator::operator*(const RepOperator& rhs) const {
  if (space.get() != rhs.space.get())
    throw StructuralError("operator product across different spaces");
  RepOperator op;
  op.space = space;
  op.matrix = matrix * rhs.matrix;
  op.exact_in_degree = exact_in_degree + rhs.exact_in_degree;
  return op;
}

RepOperator RepOperator::operator+(const RepOperator& rhs) const {
  if (space.get() != rhs.space.get())
    throw StructuralError("operator sum across different spaces");
  RepOperator op;
  op.space = space;
  op.matrix = matrix + rhs.matrix;
  op.exact_in_degree = std::max(exact_in_degree, rhs.exact_in_degree);
  return op;
}

RepOperator RepOperator::scaled(Cplx c) const {
  RepOperator op;
  op.space = space;
  op.matrix = c * matrix;
  op.exact_in_degree = exact_in_degree;
  return op;
}

RepOperator represent_poly(FockPtr space, const NCPoly& p) {
  RepOperator acc;
  acc.space = space;
  acc.matrix = SpMat(space->total_dim(), space->total_dim());
  acc.exact_in_degree = 0;
  for (const auto& term : p.terms()) {
    RepOperator prod = RepOperator::identity(space);
    for (const Letter& l : term.word) prod = prod * represent(space, l.factor, l.elem);
    acc.matrix += term.coeff * prod.matrix;
    acc.exact_in_degree = std::max(acc.exact_in_degree, prod.exact_in_degree);
  }
  return acc;
}

Vec apply_poly(const FreeFockSpace& space, const NCPoly& p, const Vec& v) {
  Vec out = Vec::Zero(space.total_dim());
  for (const auto& term : p.terms()) {
    Vec cur = v;
    for (auto it = term.word.rbegin(); it != term.word.rend(); ++it)
      cur = apply_letter(space, it->factor, it->elem, cur);
    out += term.coeff * cur;
  }
  return out;
}

Cplx free_state(const RepOperator& op) { return op.matrix.coeff(0, 0); }

Cplx moment(const FreeFockSpace& space, const NCPoly& p) {
  const int d = p.degree();
  if (d > space.depth()) {
    std::ostringstream msg;
    msg << "moment of a degree-" << d << " polynomial is not exact at depth "
        << space.depth() << "; raise the depth to " << d;
    throw ExactnessError(msg.str(), d);
  }
  return apply_poly(space, p, space.vacuum_vector())[0];
}

FreenessReport freeness_report(FockPtr space, int max_degree, const Tolerances& tol) {
  if (max_degree > space->depth())
    throw ExactnessError("freeness_report degree exceeds depth", max_degree);

  // Centered standard basis per factor.
  std::vector<std::vector<AlgebraElement>> centered;
  for (int i = 0; i < space->num_factors(); ++i) {
    std::vector<AlgebraElement> cb;
    for (const auto& b : standard_basis(space->factor(i).algebra()))
      cb.push_back(center(b, space->factor(i).state()));
    centered.push_back(std::move(cb));
  }

  FreenessReport report;
  report.max_degree = max_degree;

  const auto index_words = enumerate_words(space->num_factors(), max_degree);
  for (const Word& w : index_words) {
    if (w.length() == 0) continue;
    ++report.index_words;
    // Odometer over basis choices per letter.
    std::vector<size_t> pick(static_cast<size_t>(w.length()), 0);
    while (true) {
      Vec cur = space->vacuum_vector();
      for (int j = w.length() - 1; j >= 0; --j) {
        int f = w.indices[static_cast<size_t>(j)];
        cur = apply_letter(*space, f, centered[static_cast<size_t>(f)][pick[static_cast<size_t>(j)]], cur);
      }
      report.max_abs_moment = std::max(report.max_abs_moment, std::abs(cur[0]));
      ++report.instances;

      int pos = w.length() - 1;
      while (pos >= 0) {
        size_t limit = centered[static_cast<size_t>(w.indices[static_cast<size_t>(pos)])].size();
        if (++pick[static_cast<size_t>(pos)] < limit) break;
        pick[static_cast<size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  report.pass = report.max_abs_moment < tol.free_moment;
  return report;
}

}  // namespace freeprod
