#pragma once

#include <vector>

#include "freeprod/freefock.hpp"

namespace freeprod {

/// One tagged generator in a word: an element of the `factor`-th algebra.
struct Letter {
  int factor;
  AlgebraElement elem;
};

/// Formal noncommutative polynomial in tagged generators.
class NCPoly {
 public:
  struct Term {
    Cplx coeff;
    std::vector<Letter> word;
  };

  NCPoly() = default;
  explicit NCPoly(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static NCPoly zero() { return NCPoly{}; }
  static NCPoly constant(Cplx c) { return NCPoly({Term{c, {}}}); }
  static NCPoly letter(int factor, AlgebraElement a, Cplx coeff = 1.0) {
    return NCPoly({Term{coeff, {Letter{factor, std::move(a)}}}});
  }

  const std::vector<Term>& terms() const { return terms_; }
  int degree() const;

  NCPoly adjoint() const;
  NCPoly operator*(const NCPoly& rhs) const;
  NCPoly operator+(const NCPoly& rhs) const;
  NCPoly operator*(Cplx scalar) const;

 private:
  std::vector<Term> terms_;
};

/// A represented operator on the truncated space. `exact_in_degree` is a
/// conservative bound d guaranteeing that matrix entries between words of
/// length <= depth - d are exact (free of truncation error): 0 for the
/// identity, 1 per represented generator, additive under products.
struct RepOperator {
  FockPtr space;
  SpMat matrix;
  int exact_in_degree = 0;

  static RepOperator identity(FockPtr space);
  RepOperator adjoint() const;
  RepOperator operator*(const RepOperator& rhs) const;
  RepOperator operator+(const RepOperator& rhs) const;
  RepOperator scaled(Cplx c) const;
};

/// Left action of a in the i-th factor on the truncated space. Components
/// that would exceed the depth are dropped; the drop is recorded in
/// exact_in_degree = 1. The result is exactly the compression of the full
/// action to the truncation, so it commutes with adjoints.
RepOperator represent(FockPtr space, int factor, const AlgebraElement& a);

/// Sum over terms of the represented letter products.
RepOperator represent_poly(FockPtr space, const NCPoly& p);

/// Apply a single represented generator to a vector without materializing
/// the matrix.
Vec apply_letter(const FreeFockSpace& space, int factor, const AlgebraElement& a,
                 const Vec& v);

/// Apply a polynomial as a vector pipeline, letters right to left.
Vec apply_poly(const FreeFockSpace& space, const NCPoly& p, const Vec& v);

/// The free product state: the vector state at the vacuum.
Cplx free_state(const RepOperator& op);

/// Exact mixed moment <p xi, xi>. A product of m generators applied to the
/// vacuum never reaches word length > m, so the pipeline value carries no
/// truncation error whenever degree(p) <= depth; larger degrees raise
/// ExactnessError naming the required depth.
Cplx moment(const FreeFockSpace& space, const NCPoly& p);

struct FreenessReport {
  int max_degree = 0;
  long long instances = 0;      // alternating centered letter assignments tested
  long long index_words = 0;    // alternating index words of length 1..max_degree
  double max_abs_moment = 0.0;
  bool pass = false;
};

/// Checks the freeness condition: every alternating product of centered
/// basis elements up to max_degree has vanishing moment (below
/// tol.free_moment).
FreenessReport freeness_report(FockPtr space, int max_degree,
                               const Tolerances& tol = Tolerances{});

}  // namespace freeprod
