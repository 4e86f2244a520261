#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <string>

#include <json.hpp>

#include "mobius/params_io.hpp"

namespace ro = mobius::rankone;
using nlohmann::json;

#ifndef MOBIUS_CONFIG_DIR
#define MOBIUS_CONFIG_DIR "configs"
#endif

TEST_CASE("parse constant cutting with spacer table") {
  const json j = json::parse(R"({
    "name": "chacon",
    "cutting": {"kind": "constant", "value": 3},
    "spacers": {"kind": "table", "rows": [[0, 1, 0]]}
  })");
  const ro::RankOneParams p = ro::parse_params(j);
  CHECK(p.name == "chacon");
  CHECK(p.cutting.kind == ro::CuttingSpec::Kind::constant);
  CHECK(p.cutting_at(0, ro::Int(1)) == 3);
  CHECK(p.cutting_at(17, ro::Int(1)) == 3);
  const auto s = p.spacers_at(5, 3, ro::Int(40));
  REQUIRE(s.size() == 3);
  CHECK(s[1] == 1);
}

TEST_CASE("parse cutting list repeats the last entry") {
  const json j = json::parse(R"({
    "cutting": {"kind": "list", "values": [2, 3, 4]},
    "spacers": {"kind": "rule", "exprs": ["0"]}
  })");
  const ro::RankOneParams p = ro::parse_params(j);
  CHECK(p.name == "unnamed");
  CHECK(p.cutting_at(0, ro::Int(1)) == 2);
  CHECK(p.cutting_at(2, ro::Int(1)) == 4);
  CHECK(p.cutting_at(10, ro::Int(1)) == 4);
}

TEST_CASE("parse rule cutting and rule spacers") {
  const json j = json::parse(R"({
    "name": "growing",
    "cutting": {"kind": "rule", "expr": "n + 2"},
    "spacers": {"kind": "rule", "exprs": ["0", "h_n"]}
  })");
  const ro::RankOneParams p = ro::parse_params(j);
  CHECK(p.cutting_at(3, ro::Int(1)) == 5);
  const auto s = p.spacers_at(1, 2, ro::Int(7));
  REQUIRE(s.size() == 2);
  CHECK(s[0] == 0);
  CHECK(s[1] == 7);
}

TEST_CASE("schema violations throw with the offending field") {
  CHECK_THROWS_WITH(ro::parse_params(json::parse(R"({"spacers": {"kind": "table", "rows": [[0]]}})")),
                    Catch::Matchers::ContainsSubstring("cutting"));
  CHECK_THROWS_WITH(ro::parse_params(json::parse(R"({"cutting": {"kind": "constant", "value": 2}})")),
                    Catch::Matchers::ContainsSubstring("spacers"));
  CHECK_THROWS_WITH(
      ro::parse_params(json::parse(
          R"({"cutting": {"kind": "wavy"}, "spacers": {"kind": "table", "rows": [[0]]}})")),
      Catch::Matchers::ContainsSubstring("kind"));
  CHECK_THROWS_AS(
      ro::parse_params(json::parse(
          R"({"cutting": {"kind": "constant", "value": 2},
              "spacers": {"kind": "table", "rows": [[0, -1]]}})")),
      std::invalid_argument);
  CHECK_THROWS_AS(ro::parse_params(json::parse("[]")), std::invalid_argument);
  // Cutting rules may not depend on p_n (circular).
  CHECK_THROWS_AS(
      ro::parse_params(json::parse(
          R"({"cutting": {"kind": "rule", "expr": "p_n"},
              "spacers": {"kind": "table", "rows": [[0, 0]]}})")),
      std::invalid_argument);
}

TEST_CASE("validate collects probe failures instead of throwing") {
  // p = 1 parses but fails the stage probe.
  const json j = json::parse(R"({
    "cutting": {"kind": "constant", "value": 1},
    "spacers": {"kind": "table", "rows": [[0]]}
  })");
  const auto violations = ro::validate_params_json(j);
  REQUIRE_FALSE(violations.empty());
  // Row length 2 against p = 3 is caught by the probe as well.
  const json mismatch = json::parse(R"({
    "cutting": {"kind": "constant", "value": 3},
    "spacers": {"kind": "table", "rows": [[0, 1]]}
  })");
  CHECK_FALSE(ro::validate_params_json(mismatch).empty());
  const json good = json::parse(R"({
    "cutting": {"kind": "constant", "value": 3},
    "spacers": {"kind": "table", "rows": [[0, 1, 0]]}
  })");
  CHECK(ro::validate_params_json(good).empty());
}

TEST_CASE("file loading") {
  const std::string dir = MOBIUS_CONFIG_DIR;
  const ro::RankOneParams p = ro::load_params(dir + "/chacon.json");
  CHECK(p.name == "chacon");
  CHECK(ro::validate_params_file(dir + "/chacon.json").empty());
  CHECK(ro::validate_params_file(dir + "/infinite.json").empty());
  CHECK(ro::validate_params_file(dir + "/nospacers.json").empty());
  CHECK(ro::validate_params_file(dir + "/period2.json").empty());
  CHECK(ro::validate_params_file(dir + "/growing.json").empty());

  CHECK_THROWS_AS(ro::load_params(dir + "/does_not_exist.json"), std::runtime_error);
  CHECK_FALSE(ro::validate_params_file(dir + "/does_not_exist.json").empty());

  const std::string bad = "/tmp/mobius_bad_params.json";
  {
    std::ofstream out(bad);
    out << "{ not json";
  }
  CHECK_THROWS_AS(ro::load_params(bad), std::invalid_argument);
  CHECK_FALSE(ro::validate_params_file(bad).empty());
}
