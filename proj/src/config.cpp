#include "freeprod/config.hpp"

#include <fstream>

#include "json.hpp"

namespace freeprod {

namespace {

using nlohmann::json;

Cplx parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return Cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Cplx(j[0].get<double>(), j[1].get<double>());
  throw ValidationError(where + ": expected a number or [re, im]");
}

Mat parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw ValidationError(where + ": expected a nonempty array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  Mat m;
  for (size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty())
      throw ValidationError(where + ": row " + std::to_string(r) + " is not an array");
    if (r == 0) {
      cols = row.size();
      m = Mat::Zero(static_cast<long>(rows), static_cast<long>(cols));
    } else if (row.size() != cols) {
      throw ValidationError(where + ": ragged rows");
    }
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<long>(r), static_cast<long>(c)) =
          parse_complex(row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

// One matrix per block; a bare matrix is also accepted for single-block
// algebras. The per-block reading is tried first.
std::vector<Mat> parse_block_matrices(const json& j, const std::vector<int>& blocks,
                                      const std::string& where) {
  auto check_shapes = [&](const std::vector<Mat>& ms) {
    for (size_t b = 0; b < ms.size(); ++b)
      if (ms[b].rows() != blocks[b] || ms[b].cols() != blocks[b])
        throw ValidationError(where + " block " + std::to_string(b) +
                              ": wrong shape for dimension " + std::to_string(blocks[b]));
  };

  if (j.is_array() && j.size() == blocks.size()) {
    try {
      std::vector<Mat> out;
      for (size_t b = 0; b < j.size(); ++b)
        out.push_back(parse_matrix(j[b], where + " block " + std::to_string(b)));
      check_shapes(out);
      return out;
    } catch (const ValidationError&) {
      if (blocks.size() != 1) throw;
      // fall through to the bare-matrix reading
    }
  }
  if (blocks.size() == 1) {
    std::vector<Mat> out{parse_matrix(j, where)};
    check_shapes(out);
    return out;
  }
  throw ValidationError(where + ": expected one matrix per block (" +
                        std::to_string(blocks.size()) + ")");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  cfg.schema = j.value("schema", 1);
  if (cfg.schema != 1)
    throw ValidationError("unsupported config schema " + std::to_string(cfg.schema));
  cfg.depth = j.value("depth", 4);
  if (cfg.depth < 1) throw ValidationError("depth must be >= 1");
  cfg.seed = j.value("seed", std::uint64_t{1});

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    cfg.tol.psd = t.value("psd", cfg.tol.psd);
    cfg.tol.norm = t.value("norm", cfg.tol.norm);
    cfg.tol.faithful = t.value("faithful", cfg.tol.faithful);
    cfg.tol.free_moment = t.value("free", cfg.tol.free_moment);
    cfg.tol.pos = t.value("pos", cfg.tol.pos);
    for (double v : {cfg.tol.psd, cfg.tol.norm, cfg.tol.faithful, cfg.tol.free_moment, cfg.tol.pos})
      if (!(v > 0.0)) throw ValidationError("tolerances must be positive");
  }

  if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
    throw ValidationError("config needs a nonempty \"factors\" array");
  for (const json& f : j["factors"]) {
    FactorConfig fc;
    if (!f.contains("label") || !f["label"].is_string())
      throw ValidationError("factor without a string label");
    fc.label = f["label"].get<std::string>();
    if (!f.contains("blocks") || !f["blocks"].is_array() || f["blocks"].empty())
      throw ValidationError("factor '" + fc.label + "': missing \"blocks\"");
    for (const json& b : f["blocks"]) {
      if (!b.is_number_integer() || b.get<int>() < 1)
        throw ValidationError("factor '" + fc.label + "': block dims must be positive ints");
      fc.blocks.push_back(b.get<int>());
    }
    if (!f.contains("density"))
      throw ValidationError("factor '" + fc.label + "': missing \"density\"");
    fc.density = parse_block_matrices(f["density"], fc.blocks, "factor '" + fc.label + "' density");
    if (f.contains("elements")) {
      for (auto it = f["elements"].begin(); it != f["elements"].end(); ++it)
        fc.elements[it.key()] = parse_block_matrices(
            it.value(), fc.blocks, "factor '" + fc.label + "' element '" + it.key() + "'");
    }
    cfg.factors.push_back(std::move(fc));
  }

  if (j.contains("polynomials")) {
    for (const json& p : j["polynomials"]) {
      PolyConfig pc;
      pc.name = p.value("name", "poly" + std::to_string(cfg.polynomials.size()));
      if (!p.contains("terms") || !p["terms"].is_array())
        throw ValidationError("polynomial '" + pc.name + "': missing \"terms\"");
      for (const json& t : p["terms"]) {
        PolyTermConfig tc;
        tc.coeff = t.contains("coeff") ? parse_complex(t["coeff"], pc.name + " coeff")
                                       : Cplx(1.0);
        if (!t.contains("word") || !t["word"].is_array())
          throw ValidationError("polynomial '" + pc.name + "': term without \"word\"");
        for (const json& l : t["word"]) {
          if (!l.is_array() || l.size() != 2 || !l[0].is_string() || !l[1].is_string())
            throw ValidationError("polynomial '" + pc.name +
                                  "': letters are [factorLabel, elementName]");
          tc.word.emplace_back(l[0].get<std::string>(), l[1].get<std::string>());
        }
        pc.terms.push_back(std::move(tc));
      }
      cfg.polynomials.push_back(std::move(pc));
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

int BuiltFactors::factor_index(const std::string& label) const {
  auto it = index_of_label.find(label);
  if (it == index_of_label.end())
    throw ValidationError("unknown factor label '" + label + "'");
  return it->second;
}

AlgebraElement BuiltFactors::element(int factor, const std::string& name) const {
  auto it = named_elements.find({factor, name});
  if (it == named_elements.end())
    throw ValidationError("factor '" + algebras[static_cast<size_t>(factor)]->label() +
                          "' has no element named '" + name + "'");
  return it->second;
}

BuiltFactors build_factors(const RunConfig& config) {
  BuiltFactors built;
  for (const FactorConfig& fc : config.factors) {
    if (built.index_of_label.count(fc.label))
      throw ValidationError("duplicate factor label '" + fc.label + "'");
    auto algebra = std::make_shared<BlockAlgebra>(fc.blocks, fc.label);
    auto state = std::make_shared<StateSpec>(algebra, fc.density, config.tol);
    auto gns = std::make_shared<GnsSpace>(gns_construct(algebra, *state, config.tol));
    const int idx = static_cast<int>(built.algebras.size());
    built.index_of_label[fc.label] = idx;
    built.algebras.push_back(algebra);
    built.states.push_back(state);
    built.gns.push_back(gns);
    for (const auto& [name, blocks] : fc.elements)
      built.named_elements.emplace(std::make_pair(idx, name),
                                   AlgebraElement(algebra, blocks));
  }
  return built;
}

FockPtr build_fock_space(const BuiltFactors& built, int depth, const Tolerances& tol) {
  return std::make_shared<FreeFockSpace>(built.gns, depth, tol);
}

NCPoly build_poly(const BuiltFactors& built, const PolyConfig& poly) {
  std::vector<NCPoly::Term> terms;
  for (const PolyTermConfig& tc : poly.terms) {
    NCPoly::Term t;
    t.coeff = tc.coeff;
    for (const auto& [flabel, ename] : tc.word) {
      const int fi = built.factor_index(flabel);
      t.word.push_back(Letter{fi, built.element(fi, ename)});
    }
    terms.push_back(std::move(t));
  }
  return NCPoly(std::move(terms));
}

}  // namespace freeprod
