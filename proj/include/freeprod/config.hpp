#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "freeprod/freerep.hpp"

namespace freeprod {

struct FactorConfig {
  std::string label;
  std::vector<int> blocks;
  std::vector<Mat> density;
  std::map<std::string, std::vector<Mat>> elements;  // named elements per block
};

struct PolyTermConfig {
  Cplx coeff;
  std::vector<std::pair<std::string, std::string>> word;  // (factor label, element)
};

struct PolyConfig {
  std::string name;
  std::vector<PolyTermConfig> terms;
};

struct RunConfig {
  int schema = 1;
  int depth = 4;
  std::uint64_t seed = 1;
  Tolerances tol;
  std::vector<FactorConfig> factors;
  std::vector<PolyConfig> polynomials;
};

/// Parse a config document. Shape:
/// {
///   "schema": 1, "depth": 4, "seed": 7,
///   "tolerances": {"psd":1e-10,"norm":1e-10,"faithful":1e-8,
///                  "free":1e-10,"pos":1e-9},          (optional)
///   "factors": [ {"label": "P", "blocks": [1,1],
///                 "density": [[[[0.5,0.0]]], [[[0.5,0.0]]]],
///                 "elements": {"p": [[[[1.0,0.0]]], [[[0.0,0.0]]]]}} ],
///   "polynomials": [ {"name":"pq","terms":[{"coeff":[1,0],
///                      "word":[["P","p"],["Q","q"]]}]} ]
/// }
/// Complex entries are [re, im]; a matrix is an array of rows; "density" and
/// element values list one matrix per block (a bare matrix is accepted for
/// single-block algebras). Parse failures raise ValidationError.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Runtime objects assembled from a config.
struct BuiltFactors {
  std::vector<AlgebraPtr> algebras;
  std::vector<std::shared_ptr<const StateSpec>> states;
  std::vector<GnsPtr> gns;
  std::map<std::string, int> index_of_label;

  int factor_index(const std::string& label) const;
  AlgebraElement element(int factor, const std::string& name) const;

  std::map<std::pair<int, std::string>, AlgebraElement> named_elements;
};

BuiltFactors build_factors(const RunConfig& config);
FockPtr build_fock_space(const BuiltFactors& built, int depth, const Tolerances& tol);
NCPoly build_poly(const BuiltFactors& built, const PolyConfig& poly);

}  // namespace freeprod
