#pragma once

#include <cmath>
#include <cstdint>

#include "freeprod/common.hpp"

namespace freeprod {

/// SplitMix64: the counter-based splittable generator of Steele, Lea and
/// Flood. State advances by a fixed odd gamma; substreams are derived by
/// mixing a stream key into the seed, so instance k of a suite sees the
/// same draws regardless of evaluation order. Reports generated from the
/// same (seed, key) are byte-identical across runs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Derive an independent substream for `key` without disturbing this
  /// stream's state.
  SplitMix64 split(std::uint64_t key) const {
    SplitMix64 probe(state_ ^ (0x9E3779B97F4A7C15ull * (2 * key + 1)));
    return SplitMix64(probe.next_u64());
  }

  /// Uniform double in [0, 1) with 53 random bits (fixed mapping, no
  /// implementation-defined std:: distributions).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard complex Gaussian (Box-Muller), E|z|^2 = 1.
  Cplx gaussian() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-std::log(u1));
    double t = 2.0 * M_PI * u2;
    return Cplx(r * std::cos(t), r * std::sin(t));
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace freeprod
