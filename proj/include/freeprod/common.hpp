#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace freeprod {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<Cplx>;

/// Structural misuse of the API: mismatched parents, unknown factors,
/// broken alternation. Indicates a caller bug, not bad data.
class StructuralError : public std::logic_error {
 public:
  explicit StructuralError(const std::string& what) : std::logic_error(what) {}
};

/// Data fails a numerical contract (non-PSD density, non-unit vector,
/// non-centered element, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was asked for a result the truncated space cannot produce
/// exactly. `required_depth` names the depth that would suffice.
class ExactnessError : public std::runtime_error {
 public:
  ExactnessError(const std::string& what, int required_depth)
      : std::runtime_error(what), required_depth(required_depth) {}
  int required_depth;
};

/// Numerical tolerances used throughout. Defaults are a double-precision
/// spectral-noise ceiling with headroom; all overridable via config/CLI.
struct Tolerances {
  double psd = 1e-10;       // density PSD slack (min eigenvalue >= -psd)
  double norm = 1e-10;      // trace normalization / general identity slack
  double faithful = 1e-8;   // spectral margin deciding faithfulness and Gram rank
  double free_moment = 1e-10;  // alternating centered moments must vanish below this
  double pos = 1e-9;        // relative positivity threshold for witness search
};

}  // namespace freeprod
