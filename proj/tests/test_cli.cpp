#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "test_helpers.hpp"

namespace {

using nlohmann::json;

const char* kTwoC2Config = R"({
  "schema": 1,
  "depth": 4,
  "seed": 7,
  "factors": [
    { "label": "P", "blocks": [1, 1],
      "density": [[[[0.5, 0.0]]], [[[0.5, 0.0]]]],
      "elements": { "p": [[[[1.0, 0.0]]], [[[0.0, 0.0]]]] } },
    { "label": "Q", "blocks": [1, 1],
      "density": [[[[0.5, 0.0]]], [[[0.5, 0.0]]]],
      "elements": { "q": [[[[1.0, 0.0]]], [[[0.0, 0.0]]]] } }
  ],
  "polynomials": [
    { "name": "pq", "terms": [ { "coeff": [1.0, 0.0],
        "word": [["P", "p"], ["Q", "q"]] } ] },
    { "name": "pqp", "terms": [ { "coeff": [1.0, 0.0],
        "word": [["P", "p"], ["Q", "q"], ["P", "p"]] } ] }
  ]
})";

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FREEPROD_CLI_PATH) + " " + args + " 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

}  // namespace

TEST_CASE("moments subcommand evaluates the projection pair") {
  write_file("cli_cfg.json", kTwoC2Config);
  REQUIRE(run_cli("moments --config cli_cfg.json --with-oracle --out cli_m.json") == 0);
  json r = json::parse(read_file("cli_m.json"));
  CHECK(r["schema"] == 1);
  CHECK(r["pass"] == true);
  REQUIRE(r["moments"].size() == 2);
  CHECK(std::abs(r["moments"][0]["value_re"].get<double>() - 0.25) < 1e-10);
  CHECK(std::abs(r["moments"][1]["value_re"].get<double>() - 0.25) < 1e-10);
  CHECK(r["moments"][0]["exact"] == true);
}

TEST_CASE("freeness subcommand passes at depth 4") {
  write_file("cli_cfg.json", kTwoC2Config);
  REQUIRE(run_cli("freeness --config cli_cfg.json --depth 4 --out cli_f.json") == 0);
  json r = json::parse(read_file("cli_f.json"));
  CHECK(r["pass"] == true);
  CHECK(r["max_abs_moment"].get<double>() < 1e-10);
}

TEST_CASE("lemma-verify covers all branches and is byte-deterministic") {
  write_file("cli_cfg.json", kTwoC2Config);
  REQUIRE(run_cli("lemma-verify --config cli_cfg.json --instances 45 --seed 11"
                  " --out cli_l1.json") == 0);
  REQUIRE(run_cli("lemma-verify --config cli_cfg.json --instances 45 --seed 11"
                  " --out cli_l2.json") == 0);
  CHECK(read_file("cli_l1.json") == read_file("cli_l2.json"));

  json r = json::parse(read_file("cli_l1.json"));
  CHECK(r["pass"] == true);
  CHECK(r["branch_counts"]["scalar_identity"].get<long>() > 0);
  CHECK(r["branch_counts"]["scalar_target"].get<long>() > 0);
  CHECK(r["branch_counts"]["zero"].get<long>() > 0);
  CHECK(r["max_closed_form_residual"].get<double>() < 1e-10);

  // A different seed changes the draws but not the verdict.
  REQUIRE(run_cli("lemma-verify --config cli_cfg.json --instances 45 --seed 12"
                  " --out cli_l3.json") == 0);
  CHECK(json::parse(read_file("cli_l3.json"))["pass"] == true);
}

TEST_CASE("vav-check and faithfulness subcommands pass") {
  write_file("cli_cfg.json", kTwoC2Config);
  REQUIRE(run_cli("vav-check --config cli_cfg.json --n 2 --words 25 --out cli_v.json") == 0);
  json v = json::parse(read_file("cli_v.json"));
  CHECK(v["max_recovery_residual"].get<double>() < 1e-8);
  CHECK(v["max_containment_residual"].get<double>() < 1e-8);

  REQUIRE(run_cli("faithfulness --config cli_cfg.json --instances 20 --with-oracle"
                  " --out cli_w.json") == 0);
  json w = json::parse(read_file("cli_w.json"));
  CHECK(w["pass"] == true);
  CHECK(w["witnesses"].size() == 2);
  for (const auto& e : w["witnesses"]) {
    CHECK(e["found"] == true);
    CHECK(e["oracle_diff"].get<double>() < 1e-10);
  }
  CHECK(w["max_route_diff"].get<double>() < 1e-10);
}

TEST_CASE("example-toeplitz subcommand passes at K = 4") {
  REQUIRE(run_cli("example-toeplitz --K 4 --out cli_e.json") == 0);
  json r = json::parse(read_file("cli_e.json"));
  CHECK(r["pass"] == true);
  CHECK(r["second_dim"] == 2);
  CHECK(r["max_orthogonality"].get<double>() < 1e-12);
}

TEST_CASE("config errors exit 2, exactness violations exit 3") {
  write_file("cli_bad.json", "{ not json");
  CHECK(run_cli("moments --config cli_bad.json") == 2);

  write_file("cli_missing.json", R"({"schema":1,"factors":[]})");
  CHECK(run_cli("moments --config cli_missing.json") == 2);

  // Degree-5 word at depth 4: the exactness guard fires.
  json deep = json::parse(kTwoC2Config);
  deep["polynomials"] = json::array(
      {{{"name", "deep"},
        {"terms", json::array({{{"coeff", json::array({1.0, 0.0})},
                                {"word", json::array({json::array({"P", "p"}),
                                                      json::array({"Q", "q"}),
                                                      json::array({"P", "p"}),
                                                      json::array({"Q", "q"}),
                                                      json::array({"P", "p"})})}}})}}});
  write_file("cli_deep.json", deep.dump());
  CHECK(run_cli("moments --config cli_deep.json") == 3);
}
