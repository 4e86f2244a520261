#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mobius/words.hpp"

namespace ro = mobius::rankone;
using ro::Int;

namespace {

ro::RankOneParams chacon() {
  ro::RankOneParams p;
  p.name = "chacon";
  p.cutting.kind = ro::CuttingSpec::Kind::constant;
  p.cutting.value = 3;
  p.spacers.kind = ro::SpacerSpec::Kind::table;
  p.spacers.rows = {{Int(0), Int(1), Int(0)}};
  return p;
}

ro::RankOneParams infinite_family() {
  ro::RankOneParams p;
  p.name = "infinite";
  p.cutting.kind = ro::CuttingSpec::Kind::constant;
  p.cutting.value = 2;
  p.spacers.kind = ro::SpacerSpec::Kind::rule;
  p.spacers.exprs = {ro::RuleExpr::parse("0"), ro::RuleExpr::parse("h_n")};
  return p;
}

ro::RankOneParams period2() {
  ro::RankOneParams p;
  p.name = "period2";
  p.cutting.kind = ro::CuttingSpec::Kind::constant;
  p.cutting.value = 2;
  p.spacers.kind = ro::SpacerSpec::Kind::table;
  p.spacers.rows = {{Int(1), Int(1)}};
  return p;
}

ro::RankOneParams nospacers() {
  ro::RankOneParams p;
  p.name = "nospacers";
  p.cutting.kind = ro::CuttingSpec::Kind::constant;
  p.cutting.value = 2;
  p.spacers.kind = ro::SpacerSpec::Kind::table;
  p.spacers.rows = {{Int(0), Int(0)}};
  return p;
}

ro::RankOneParams growing() {
  ro::RankOneParams p;
  p.name = "growing";
  p.cutting.kind = ro::CuttingSpec::Kind::rule;
  p.cutting.rule = ro::RuleExpr::parse("n + 2");
  p.spacers.kind = ro::SpacerSpec::Kind::rule;
  p.spacers.exprs = {ro::RuleExpr::parse("0")};
  return p;
}

std::vector<std::size_t> find_all(const std::string& needle, const std::string& hay) {
  std::vector<std::size_t> out;
  for (std::size_t i = hay.find(needle); i != std::string::npos; i = hay.find(needle, i + 1))
    out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("rule expressions") {
  Int h(5);
  CHECK(ro::RuleExpr::parse("0").eval(3, 2, h) == 0);
  CHECK(ro::RuleExpr::parse("n + 2").eval(3, 2, h) == 5);
  CHECK(ro::RuleExpr::parse("h_n").eval(0, 2, h) == 5);
  CHECK(ro::RuleExpr::parse("2 * h_n + n").eval(3, 2, h) == 13);
  CHECK(ro::RuleExpr::parse("p_n").references_p);
  CHECK_FALSE(ro::RuleExpr::parse("n + h_n").references_p);
  CHECK_THROWS_AS(ro::RuleExpr::parse("n -"), std::invalid_argument);
  CHECK_THROWS_AS(ro::RuleExpr::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(ro::RuleExpr::parse("q"), std::invalid_argument);
}

TEST_CASE("chacon blocks match hand expansion") {
  const auto blocks = ro::build_blocks(chacon(), 6);
  REQUIRE(blocks.size() == 7);
  CHECK(*blocks[0].word == "0");
  CHECK(*blocks[1].word == "0010");
  CHECK(*blocks[2].word == "0010001010010");
  const std::vector<long> heights = {1, 4, 13, 40, 121, 364, 1093};
  for (std::size_t n = 0; n < blocks.size(); ++n) {
    CHECK(blocks[n].stage == static_cast<long>(n));
    CHECK(blocks[n].height == Int(heights[n]));
    REQUIRE(blocks[n].word.has_value());
    CHECK(blocks[n].word->size() == static_cast<std::size_t>(heights[n]));
    // Census: heights split into zero and one counts.
    CHECK(blocks[n].zeros + blocks[n].ones == blocks[n].height);
    CHECK(blocks[n].zeros == Int(static_cast<long>(std::count(
                                 blocks[n].word->begin(), blocks[n].word->end(), '0'))));
  }
  // Prefix property: each block begins the next one.
  for (std::size_t n = 0; n + 1 < blocks.size(); ++n)
    CHECK(blocks[n + 1].word->compare(0, blocks[n].word->size(), *blocks[n].word) == 0);
}

TEST_CASE("length cap stops materialization but not the census") {
  const auto blocks = ro::build_blocks(chacon(), 6, 100);
  REQUIRE(blocks.size() == 7);
  CHECK(blocks[3].word.has_value());   // |W_3| = 40
  CHECK_FALSE(blocks[4].word.has_value());  // |W_4| = 121 > 100
  CHECK(blocks[6].height == Int(1093));
  CHECK(blocks[6].zeros == Int(729));
}

TEST_CASE("occurrence counting is overlapping") {
  CHECK(ro::occurrence_count("0", "0010001010010") == 9);
  CHECK(ro::occurrence_count("1", "0010001010010") == 4);
  CHECK(ro::occurrence_count("00", "000") == 2);
  CHECK(ro::occurrence_count("0010", "0010001010010") == 3);
  CHECK(ro::occurrence_count("11", "0010001010010") == 0);
}

TEST_CASE("chacon copy offsets equal string search") {
  const ro::RankOneParams params = chacon();
  const auto blocks = ro::build_blocks(params, 6);
  const std::vector<std::vector<long>> expected = {
      {0, 4, 9}, {0, 13, 27}, {0, 40, 81}, {0, 121, 243}, {0, 364, 729}};
  for (long n = 1; n <= 5; ++n) {
    const std::vector<Int> offsets = ro::occurrence_offsets(params, n);
    REQUIRE(offsets.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) CHECK(offsets[j] == Int(expected[n - 1][j]));
    const auto found = find_all(*blocks[n].word, *blocks[n + 1].word);
    REQUIRE(found.size() == offsets.size());
    for (std::size_t j = 0; j < found.size(); ++j)
      CHECK(Int(static_cast<unsigned long>(found[j])) == offsets[j]);
  }
}

TEST_CASE("materialized prefix extends the blocks") {
  const ro::RankOneParams params = chacon();
  const auto blocks = ro::build_blocks(params, 4);
  const std::string prefix = ro::materialize_prefix(params, 40);
  CHECK(prefix == *blocks[3].word);
  CHECK(ro::materialize_prefix(params, 7) == "0010001");
  CHECK_THROWS_AS(ro::materialize_prefix(params, 0), std::invalid_argument);
}

TEST_CASE("binary word validation") {
  CHECK_NOTHROW(ro::check_binary_word("0010", "test"));
  CHECK_THROWS_AS(ro::check_binary_word("01x0", "test"), std::invalid_argument);
  CHECK_THROWS_AS(ro::check_binary_word("", "test"), std::invalid_argument);
}

TEST_CASE("chacon cylinder measures") {
  const ro::MeasureSeries ones = ro::cylinder_measure(chacon(), "1", 4);
  REQUIRE(ones.ratios.size() == 5);
  CHECK(ones.ratios[0] == 0.0);
  CHECK(ones.ratios[1] == Catch::Approx(1.0 / 3.0).margin(1e-15));
  CHECK(ones.ratios[2] == Catch::Approx(4.0 / 9.0).margin(1e-15));
  CHECK(ones.ratios[3] == Catch::Approx(13.0 / 27.0).margin(1e-15));
  CHECK(ones.ratios[4] == Catch::Approx(40.0 / 81.0).margin(1e-15));
  CHECK(ones.estimate == ones.ratios.back());

  // fr(W_1, W_m)/fr(0, W_m) settles at exactly 1/3 from stage 2 on.
  const ro::MeasureSeries w1 = ro::cylinder_measure(chacon(), "0010", 6);
  for (std::size_t i = 2; i < w1.ratios.size(); ++i)
    CHECK(w1.ratios[i] == Catch::Approx(1.0 / 3.0).margin(1e-15));
}

TEST_CASE("normalized cylinder scaling") {
  const ro::NormalizedCylinder nc = ro::normalized_cylinder(chacon(), 1, 6);
  CHECK(nc.word == "0010");
  CHECK(nc.measure == Catch::Approx(1.0 / 3.0).margin(1e-15));
  CHECK(nc.normalization == Catch::Approx(std::sqrt(3.0)).margin(1e-12));
  CHECK_THROWS_AS(ro::normalized_cylinder(chacon(), 6, 6), std::invalid_argument);
}

TEST_CASE("infinite family words and exact ratio curve") {
  const ro::RankOneParams params = infinite_family();
  const auto blocks = ro::build_blocks(params, 12);
  CHECK(*blocks[1].word == "001");
  // ones/zeros at stage n is (3^n - 2^n) / 2^n exactly.
  mpz_class p3 = 1, p2 = 1;
  for (std::size_t n = 0; n < blocks.size(); ++n) {
    CHECK(blocks[n].zeros == p2);
    CHECK(blocks[n].ones == p3 - p2);
    CHECK(blocks[n].height == p3);
    p3 *= 3;
    p2 *= 2;
  }
  const ro::InfiniteVerdict verdict = ro::is_infinite(params, 12, 100.0);
  CHECK(verdict.curve.back() == Catch::Approx(527345.0 / 4096.0).margin(1e-9));
  CHECK(verdict.curve.back() > 100.0);
  CHECK(verdict.infinite_suspected);
  CHECK(verdict.verdict == "infinite-suspected");

  const ro::InfiniteVerdict finite = ro::is_infinite(chacon(), 12, 100.0);
  CHECK_FALSE(finite.infinite_suspected);
  CHECK(finite.verdict == "finite-suspected");
  CHECK_THROWS_AS(ro::is_infinite(chacon(), 2, 100.0), std::invalid_argument);
}

TEST_CASE("infinite family block measure") {
  const ro::MeasureSeries s = ro::cylinder_measure(infinite_family(), "001", 6);
  for (std::size_t i = 2; i < s.ratios.size(); ++i)
    CHECK(s.ratios[i] == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("periodicity scan witnesses aperiodicity") {
  const ro::RankOneParams params = period2();
  const auto blocks = ro::build_blocks(params, 2);
  CHECK(*blocks[2].word == "0101101011");
  const ro::PeriodicityReport report = ro::periodicity_report(params, 200, 50);
  CHECK(report.status == "aperiodicity-witnessed");
  CHECK(report.aperiodicity_witnessed);
  CHECK(report.periodic_periods.empty());
  REQUIRE(report.witnesses.size() == 50);
  const std::string w = ro::materialize_prefix(params, 200);
  for (const auto& wit : report.witnesses) {
    CHECK(w[wit.i] != w[wit.i + wit.q]);          // genuine violation
    for (std::uint64_t i = 0; i < wit.i; ++i)     // and the first one
      CHECK(w[i] == w[i + wit.q]);
  }
  // The q = 2 violation appears first at i = 2 (0101[1]...).
  CHECK(report.witnesses[1].q == 2);
  CHECK(report.witnesses[1].i == 2);
}

TEST_CASE("degenerate family is periodic to depth") {
  const ro::PeriodicityReport report = ro::periodicity_report(nospacers(), 64, 8);
  CHECK(report.status == "periodic-up-to-depth");
  CHECK_FALSE(report.aperiodicity_witnessed);
  CHECK(report.periodic_periods.size() == 8);  // 0^infinity admits every period
  CHECK_THROWS_AS(ro::periodicity_report(nospacers(), 8, 8), std::invalid_argument);
}

TEST_CASE("growing cutting rule") {
  const ro::RankOneParams params = growing();
  const auto blocks = ro::build_blocks(params, 4);
  // p_n = n + 2 with no spacers: heights 1, 2, 6, 24, 120.
  const std::vector<long> heights = {1, 2, 6, 24, 120};
  for (std::size_t n = 0; n < blocks.size(); ++n) CHECK(blocks[n].height == Int(heights[n]));
  CHECK(*blocks[2].word == "000000");
  // The single spacer rule broadcasts across all p_n slots.
  const std::vector<Int> s = params.spacers_at(3, 5, Int(24));
  REQUIRE(s.size() == 5);
  for (const Int& v : s) CHECK(v == 0);
}

TEST_CASE("prime condition") {
  // Chacon: (p-1) h + sum s = 2 h_n + 1 = 3^{n+1}: odd, always divisible by 3.
  CHECK(ro::prime_condition(chacon(), 0, 2));
  CHECK(ro::prime_condition(chacon(), 5, 2));
  CHECK_FALSE(ro::prime_condition(chacon(), 0, 3));
  CHECK_FALSE(ro::prime_condition(chacon(), 1, 3));
  CHECK(ro::prime_condition(nospacers(), 0, 3));  // quantity = h_n = 2^n
  CHECK_THROWS_AS(ro::prime_condition(chacon(), 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(ro::prime_condition(chacon(), 0, 1), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  ro::RankOneParams bad = chacon();
  bad.cutting.value = 1;
  CHECK_THROWS_AS(ro::build_blocks(bad, 3), std::invalid_argument);
  ro::RankOneParams mismatch = chacon();
  mismatch.spacers.rows = {{Int(0), Int(1)}};  // row length 2 vs p = 3
  CHECK_THROWS_AS(ro::build_blocks(mismatch, 3), std::invalid_argument);
}
