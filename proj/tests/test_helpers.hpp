#pragma once

#include <memory>
#include <vector>

#include "freeprod/compress.hpp"
#include "freeprod/rng.hpp"

namespace fptest {

using namespace freeprod;

inline AlgebraPtr c2_algebra(const std::string& label = "C2") {
  return std::make_shared<BlockAlgebra>(std::vector<int>{1, 1}, label);
}

inline AlgebraPtr m2_algebra(const std::string& label = "M2") {
  return std::make_shared<BlockAlgebra>(std::vector<int>{2}, label);
}

inline StateSpec c2_state(const AlgebraPtr& a, double w0 = 0.5, double w1 = 0.5) {
  Mat b0 = Mat::Constant(1, 1, w0);
  Mat b1 = Mat::Constant(1, 1, w1);
  return StateSpec(a, {b0, b1});
}

inline StateSpec m2_state(const AlgebraPtr& a, double w0 = 0.5, double w1 = 0.5) {
  Mat rho = Mat::Zero(2, 2);
  rho(0, 0) = w0;
  rho(1, 1) = w1;
  return StateSpec(a, {rho});
}

// The first minimal projection (1, 0) of a two-point algebra.
inline AlgebraElement c2_projection(const AlgebraPtr& a) {
  return AlgebraElement(a, {Mat::Ones(1, 1), Mat::Zero(1, 1)});
}

inline AlgebraElement random_element(const AlgebraPtr& algebra, SplitMix64& rng) {
  std::vector<Mat> blocks;
  for (int d : algebra->block_dims()) {
    Mat m(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = rng.gaussian();
    blocks.push_back(std::move(m));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

inline Vec random_complement_unit(const GnsSpace& g, SplitMix64& rng) {
  Vec v = Vec::Zero(g.dim());
  for (int i = 1; i < g.dim(); ++i) v[i] = rng.gaussian();
  if (v.norm() < 1e-12) v[1] = 1.0;
  return v / v.norm();
}

// Two C^2 factors with the symmetric states: the standard desk-scale
// two-projection setup. p and q are the first minimal projections.
struct TwoC2 {
  AlgebraPtr ap, aq;
  GnsPtr gp, gq;
  FockPtr space;
  AlgebraElement p, q;

  explicit TwoC2(int depth)
      : ap(c2_algebra("P")),
        aq(c2_algebra("Q")),
        gp(std::make_shared<GnsSpace>(gns_construct(ap, c2_state(ap)))),
        gq(std::make_shared<GnsSpace>(gns_construct(aq, c2_state(aq)))),
        space(std::make_shared<FreeFockSpace>(std::vector<GnsPtr>{gp, gq}, depth)),
        p(c2_projection(ap)),
        q(c2_projection(aq)) {}
};

// Mixed pair: C^2 with weights (1/3, 2/3) and M_2 with weights (0.3, 0.7).
struct MixedPair {
  AlgebraPtr a0, a1;
  GnsPtr g0, g1;
  FockPtr space;

  explicit MixedPair(int depth)
      : a0(c2_algebra("A")),
        a1(m2_algebra("B")),
        g0(std::make_shared<GnsSpace>(gns_construct(a0, c2_state(a0, 1.0 / 3, 2.0 / 3)))),
        g1(std::make_shared<GnsSpace>(gns_construct(a1, m2_state(a1, 0.3, 0.7)))),
        space(std::make_shared<FreeFockSpace>(std::vector<GnsPtr>{g0, g1}, depth)) {}
};

}  // namespace fptest
