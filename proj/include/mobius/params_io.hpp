#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobius/words.hpp"

namespace mobius::rankone {

// Parameter files are JSON:
//   {
//     "name": "chacon",
//     "cutting": {"kind": "constant", "value": 3}
//               | {"kind": "list", "values": [3, 3, 2]}
//               | {"kind": "rule", "expr": "n + 2"},
//     "spacers": {"kind": "table", "rows": [[0, 1, 0]]}   // one row => every stage
//               | {"kind": "rule", "exprs": ["0", "h_n"]} // one expr => every slot
//   }
// Rule vocabulary: nonnegative integer constants, n, p_n, h_n, with + and *.

inline RankOneParams parse_params(const nlohmann::json& j) {
  RankOneParams params;
  if (!j.is_object()) throw std::invalid_argument("params: top level must be an object");
  params.name = j.value("name", std::string("unnamed"));

  if (!j.contains("cutting")) throw std::invalid_argument("params: missing 'cutting'");
  const auto& c = j.at("cutting");
  const std::string ckind = c.value("kind", std::string());
  if (ckind == "constant") {
    params.cutting.kind = CuttingSpec::Kind::constant;
    params.cutting.value = c.at("value").get<std::uint64_t>();
  } else if (ckind == "list") {
    params.cutting.kind = CuttingSpec::Kind::list;
    params.cutting.values = c.at("values").get<std::vector<std::uint64_t>>();
    if (params.cutting.values.empty())
      throw std::invalid_argument("params: cutting list is empty");
  } else if (ckind == "rule") {
    params.cutting.kind = CuttingSpec::Kind::rule;
    params.cutting.rule = RuleExpr::parse(c.at("expr").get<std::string>());
    if (params.cutting.rule.references_p)
      throw std::invalid_argument("params: cutting rule cannot reference p_n");
  } else {
    throw std::invalid_argument("params: cutting.kind must be constant|list|rule");
  }

  if (!j.contains("spacers")) throw std::invalid_argument("params: missing 'spacers'");
  const auto& s = j.at("spacers");
  const std::string skind = s.value("kind", std::string());
  if (skind == "table") {
    params.spacers.kind = SpacerSpec::Kind::table;
    for (const auto& row : s.at("rows")) {
      std::vector<Int> r;
      for (const auto& v : row) {
        if (!v.is_number_unsigned())
          throw std::invalid_argument("params: spacer table entries must be nonnegative integers");
        r.emplace_back(static_cast<unsigned long>(v.get<std::uint64_t>()));
      }
      params.spacers.rows.push_back(std::move(r));
    }
    if (params.spacers.rows.empty()) throw std::invalid_argument("params: spacer table is empty");
  } else if (skind == "rule") {
    params.spacers.kind = SpacerSpec::Kind::rule;
    for (const auto& e : s.at("exprs"))
      params.spacers.exprs.push_back(RuleExpr::parse(e.get<std::string>()));
    if (params.spacers.exprs.empty()) throw std::invalid_argument("params: spacer rules are empty");
  } else {
    throw std::invalid_argument("params: spacers.kind must be table|rule");
  }
  return params;
}

inline RankOneParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("params: " + path + ": " + e.what());
  }
  return parse_params(j);
}

// Non-throwing validation pass for the CLI: collects violations instead of
// stopping at the first.  A probe over the first few stages catches rule
// evaluation failures (negative spacers, p_n < 2, row-length mismatches).
inline std::vector<std::string> validate_params_json(const nlohmann::json& j,
                                                     long probe_stages = 4) {
  std::vector<std::string> violations;
  RankOneParams params;
  try {
    params = parse_params(j);
  } catch (const std::exception& e) {
    violations.emplace_back(e.what());
    return violations;
  }
  try {
    build_blocks(params, probe_stages, kDefaultLengthCap);
  } catch (const std::exception& e) {
    violations.emplace_back(e.what());
  }
  return violations;
}

inline std::vector<std::string> validate_params_file(const std::string& path,
                                                     long probe_stages = 4) {
  std::ifstream in(path);
  if (!in) return {"cannot open params file: " + path};
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    return {std::string("params: ") + e.what()};
  }
  return validate_params_json(j, probe_stages);
}

}  // namespace mobius::rankone
