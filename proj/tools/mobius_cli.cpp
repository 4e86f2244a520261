// Command-line front end: sieves, rank-one words, cylinder measures, weighted
// orbit averages, Riesz-product spectra, and the singularity diagnostics.
//
// Exit codes: 0 success, 2 configuration/validation failure, 3 coefficient
// budget exhausted, 4 orbit/evaluation failure, 1 anything else.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mobius/mobius.hpp"

#ifndef MOBIUS_TOOL_VERSION
#define MOBIUS_TOOL_VERSION "0.0.0"
#endif

namespace {

namespace rankone = mobius::rankone;
namespace orbits = mobius::orbits;
namespace spectral = mobius::spectral;
namespace numtheory = mobius::numtheory;
namespace io = mobius::io;

using mobius::io::fmt;

// ---------------------------------------------------------------------------
// Small utilities.
// ---------------------------------------------------------------------------
bool is_pow2(std::uint64_t n) { return mobius::fourier::is_power_of_two(n); }

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string tok = s.substr(pos, comma - pos);
    if (tok.empty()) throw std::invalid_argument("list: empty entry in '" + s + "'");
    std::size_t used = 0;
    const unsigned long long v = std::stoull(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("list: bad entry '" + tok + "'");
    out.push_back(v);
    pos = comma + 1;
    if (comma == s.size()) break;
  }
  return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Structured-text run summary.  Wall clock and version live here (and only
// here) so the CSV payloads stay byte-reproducible.
class Report {
 public:
  explicit Report(std::string command)
      : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {}

  void kv(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
  void kv(const std::string& key, double v) { kv(key, fmt(v)); }
  void kv(const std::string& key, std::uint64_t v) { kv(key, fmt(v)); }
  void kv(const std::string& key, std::int64_t v) { kv(key, fmt(v)); }
  void kv(const std::string& key, int v) { kv(key, fmt(v)); }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "command: " << command_ << '\n';
    out << "version: " << MOBIUS_TOOL_VERSION << '\n';
    for (const auto& [k, v] : lines_) out << k << ": " << v << '\n';
    const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
    out << "wall_ms: " << wall.count() << '\n';
  }

 private:
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, std::string>> lines_;
};

// Validation outcome: prints violations (validate-only) or the first failure.
// Returns -1 to continue, otherwise the process exit code.
int settle_validation(const std::vector<std::string>& violations, bool validate_only) {
  if (validate_only) {
    if (violations.empty()) {
      std::cout << "ok\n";
      return 0;
    }
    for (const std::string& v : violations) std::cout << v << '\n';
    return 2;
  }
  if (!violations.empty()) {
    std::cerr << "error: validation: " << violations.front() << '\n';
    return 2;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Observable mini-syntax:
//   cylinder:V@K    indicator of word V at position K (subshift)
//   cylinder0:V@K   the same minus its value at the all-ones point
//   point:k=v,...   finitely supported on the integers
//   interval:a,b    indicator of [a,b] (Boole map)
//   cauchy          density 1/(pi(1+x^2)) (Boole map)
//   mobius | liouville   arithmetic observable (integer shift)
//   const:c         constant
// ---------------------------------------------------------------------------
orbits::Observable parse_observable(const std::string& spec) {
  auto after = [&](std::string_view prefix) { return spec.substr(prefix.size()); };
  if (spec == "mobius")
    return orbits::ArithmeticObservable{orbits::ArithmeticObservable::Fn::mobius};
  if (spec == "liouville")
    return orbits::ArithmeticObservable{orbits::ArithmeticObservable::Fn::liouville};
  if (spec == "cauchy") return orbits::CauchyDensity{};
  if (spec.rfind("const:", 0) == 0) return orbits::ConstantObservable{std::stod(after("const:"))};
  if (spec.rfind("cylinder:", 0) == 0 || spec.rfind("cylinder0:", 0) == 0) {
    const bool centered = spec.rfind("cylinder0:", 0) == 0;
    const std::string body = after(centered ? "cylinder0:" : "cylinder:");
    const std::size_t at = body.find('@');
    if (at == std::string::npos)
      throw std::invalid_argument("observable: expected cylinder:WORD@POSITION");
    orbits::CylinderIndicator c;
    c.word = body.substr(0, at);
    c.position = std::stoull(body.substr(at + 1));
    c.centered = centered;
    rankone::check_binary_word(c.word, "observable");
    return c;
  }
  if (spec.rfind("interval:", 0) == 0) {
    const std::string body = after("interval:");
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("observable: expected interval:LO,HI");
    orbits::IntervalIndicator iv;
    iv.lo = std::stod(body.substr(0, comma));
    iv.hi = std::stod(body.substr(comma + 1));
    if (iv.hi < iv.lo) throw std::invalid_argument("observable: interval hi < lo");
    return iv;
  }
  if (spec.rfind("point:", 0) == 0) {
    orbits::FinitelySupported fs;
    std::string body = after("point:");
    std::size_t pos = 0;
    while (pos < body.size()) {
      const std::size_t comma = std::min(body.find(',', pos), body.size());
      const std::string tok = body.substr(pos, comma - pos);
      const std::size_t eq = tok.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("observable: expected point:INDEX=VALUE,...");
      fs.values[std::stoll(tok.substr(0, eq))] = std::stod(tok.substr(eq + 1));
      pos = comma + 1;
      if (comma == body.size()) break;
    }
    if (fs.values.empty()) throw std::invalid_argument("observable: empty point list");
    return fs;
  }
  throw std::invalid_argument("observable: unrecognized spec '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Orbit-model options shared by avg/hopf/dkbsz.
// ---------------------------------------------------------------------------
struct ModelOpts {
  std::string kind = "integer-shift";  // rankone | integer-shift | boole
  std::string params_file;
  std::string base = "canonical";  // rankone base point: canonical | ones
  long long start = 0;             // integer shift
  double x0 = 0.5;                 // Boole map
};

void add_model_options(CLI::App* cmd, ModelOpts& m) {
  cmd->add_option("--model", m.kind, "orbit model: rankone | integer-shift | boole")
      ->capture_default_str();
  cmd->add_option("--params", m.params_file, "rank-one parameter file (JSON)");
  cmd->add_option("--base", m.base, "rank-one base point: canonical | ones")
      ->capture_default_str();
  cmd->add_option("--start", m.start, "integer-shift starting point")->capture_default_str();
  cmd->add_option("--x0", m.x0, "Boole map starting point")->capture_default_str();
}

void model_violations(const ModelOpts& m, std::vector<std::string>& out) {
  if (m.kind == "rankone") {
    if (m.params_file.empty()) {
      out.push_back("params: required for --model rankone");
    } else {
      for (const std::string& v : rankone::validate_params_file(m.params_file))
        out.push_back("params: " + v);
    }
    if (m.base != "canonical" && m.base != "ones")
      out.push_back("base: must be canonical or ones, got '" + m.base + "'");
  } else if (m.kind == "boole") {
    if (m.x0 == 0.0) out.push_back("x0: the Boole map is undefined at 0");
  } else if (m.kind != "integer-shift") {
    out.push_back("model: must be rankone, integer-shift, or boole, got '" + m.kind + "'");
  }
}

orbits::OrbitModel build_model(const ModelOpts& m) {
  if (m.kind == "rankone") {
    orbits::RankOneSubshift s;
    s.params = rankone::load_params(m.params_file);
    s.base = (m.base == "ones") ? orbits::RankOneSubshift::Base::ones
                                : orbits::RankOneSubshift::Base::canonical;
    return s;
  }
  if (m.kind == "boole") return orbits::BooleMap{m.x0};
  return orbits::IntegerShift{m.start};
}

void observable_violations(const ModelOpts& m, const std::string& spec,
                           std::vector<std::string>& out) {
  orbits::Observable f;
  try {
    f = parse_observable(spec);
  } catch (const std::exception& e) {
    out.push_back(e.what());
    return;
  }
  const bool cyl = std::holds_alternative<orbits::CylinderIndicator>(f);
  const bool fsup = std::holds_alternative<orbits::FinitelySupported>(f);
  const bool ivl = std::holds_alternative<orbits::IntervalIndicator>(f);
  const bool cau = std::holds_alternative<orbits::CauchyDensity>(f);
  const bool ari = std::holds_alternative<orbits::ArithmeticObservable>(f);
  const bool cst = std::holds_alternative<orbits::ConstantObservable>(f);
  if (m.kind == "rankone" && !(cyl || cst))
    out.push_back("observable: '" + spec + "' does not apply to a rank-one subshift");
  if (m.kind == "integer-shift" && !(fsup || ari || cst))
    out.push_back("observable: '" + spec + "' does not apply to the integer shift");
  if (m.kind == "boole" && !(ivl || cau || cst))
    out.push_back("observable: '" + spec + "' does not apply to the Boole map");
}

bool needs_table(const orbits::Observable& f, orbits::Weight w) {
  return w != orbits::Weight::none || std::holds_alternative<orbits::ArithmeticObservable>(f);
}

std::uint64_t table_limit_for(const ModelOpts& m, const orbits::Observable& f,
                              std::uint64_t reach) {
  std::uint64_t limit = reach;
  if (m.kind == "integer-shift" && std::holds_alternative<orbits::ArithmeticObservable>(f) &&
      m.start > 0)
    limit += static_cast<std::uint64_t>(m.start);
  return limit;
}

void checkpoint_violations(const std::string& spec, std::vector<std::string>& out,
                           std::vector<std::uint64_t>* parsed = nullptr) {
  std::vector<std::uint64_t> cps;
  try {
    cps = parse_u64_list(spec);
  } catch (const std::exception& e) {
    out.push_back(std::string("checkpoints: ") + e.what());
    return;
  }
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] == 0) {
      out.push_back("checkpoints: entries must be >= 1");
      return;
    }
    if (i > 0 && cps[i] <= cps[i - 1]) {
      out.push_back("checkpoints: must be strictly ascending");
      return;
    }
  }
  if (parsed) *parsed = cps;
}

void grid_violations(std::uint64_t grid, std::vector<std::string>& out) {
  if (!is_pow2(grid) || grid < 2)
    out.push_back("grid: must be a power of two >= 2, got " + std::to_string(grid));
}

// ---------------------------------------------------------------------------
// sieve
// ---------------------------------------------------------------------------
struct SieveOpts {
  std::uint64_t limit = 0;
  std::uint64_t grid = 0;  // 0 = no twisted scan
  std::string checkpoints;
  std::string cache_out;
  std::string cache_in;
};

int run_sieve(const SieveOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  std::vector<std::uint64_t> scan_cps;
  if (o.cache_in.empty() && o.limit < 1) viol.push_back("limit: must be >= 1");
  if (!o.cache_in.empty() && !std::filesystem::exists(o.cache_in))
    viol.push_back("from-cache: no such file: " + o.cache_in);
  if (o.grid != 0) grid_violations(o.grid, viol);
  if (!o.checkpoints.empty()) {
    if (o.grid == 0) viol.push_back("checkpoints: only meaningful with --grid (twisted scan)");
    checkpoint_violations(o.checkpoints, viol, &scan_cps);
  }
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  Report report("sieve");
  const numtheory::ArithmeticTable table =
      o.cache_in.empty() ? numtheory::sieve(o.limit) : numtheory::read_cache(o.cache_in);
  report.kv("limit", table.limit);
  report.kv("mertens", table.M(table.limit));
  report.kv("squarefree_density", numtheory::squarefree_density(table));

  {
    io::CsvWriter csv(join_path(out_dir, "sieve_mertens.csv"));
    csv.row({"n", "mertens", "mertens_over_n", "squarefree_density"});
    std::uint64_t next = 1, squarefree = 0;
    for (std::uint64_t n = 1; n <= table.limit; ++n) {
      squarefree += (table.mu(n) != 0);
      if (n == next || n == table.limit) {
        csv.row({fmt(n), fmt(table.M(n)),
                 fmt(static_cast<double>(table.M(n)) / static_cast<double>(n)),
                 fmt(static_cast<double>(squarefree) / static_cast<double>(n))});
        while (next <= n) next *= 10;
      }
    }
  }

  if (o.grid != 0) {
    if (scan_cps.empty())
      for (std::uint64_t n = std::min<std::uint64_t>(1000, table.limit); n <= table.limit;
           n *= 10)
        scan_cps.push_back(n);
    if (scan_cps.back() > table.limit) {
      std::cerr << "error: validation: checkpoints: exceed the sieve limit\n";
      return 2;
    }
    const numtheory::TwistedScan scan = numtheory::twisted_sum_scan(table, o.grid, scan_cps);
    io::CsvWriter csv(join_path(out_dir, "sieve_twisted.csv"));
    csv.row({"n", "sup", "sup_over_n", "argmax_t"});
    for (const numtheory::TwistedPoint& p : scan.points)
      csv.row({fmt(p.n), fmt(p.sup), fmt(p.sup / static_cast<double>(p.n)), fmt(p.argmax_t)});
    report.kv("twisted_grid", o.grid);
    report.kv("twisted_loglog_slope", scan.loglog_slope);
  }

  if (!o.cache_out.empty()) {
    numtheory::write_cache(table, o.cache_out);
    report.kv("cache", o.cache_out);
  }
  report.write(join_path(out_dir, "sieve_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// words
// ---------------------------------------------------------------------------
struct WordsOpts {
  std::string params_file;
  long stages = 6;
  std::uint64_t cap = rankone::kDefaultLengthCap;
  double infinite_threshold = 100.0;
  std::uint64_t depth = 0;  // 0 = skip the periodicity scan
  std::uint64_t max_period = 50;
};

int run_words(const WordsOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  for (const std::string& v : rankone::validate_params_file(o.params_file))
    viol.push_back("params: " + v);
  if (o.stages < 1) viol.push_back("stages: must be >= 1");
  if (o.cap < 1) viol.push_back("cap: must be >= 1");
  if (o.depth != 0 && o.depth <= o.max_period)
    viol.push_back("depth: must exceed max-period for the periodicity scan");
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const rankone::RankOneParams params = rankone::load_params(o.params_file);
  Report report("words");
  report.kv("name", params.name);
  report.kv("stages", o.stages);

  const std::vector<rankone::BlockStats> blocks = rankone::build_blocks(params, o.stages, o.cap);
  {
    io::CsvWriter csv(join_path(out_dir, "words_blocks.csv"));
    csv.row({"stage", "height", "zeros", "ones", "materialized"});
    for (const rankone::BlockStats& b : blocks)
      csv.row({fmt(b.stage), b.height.get_str(), b.zeros.get_str(), b.ones.get_str(),
               fmt(b.word ? 1 : 0)});
  }
  {
    std::ofstream words(join_path(out_dir, "words_words.txt"));
    for (const rankone::BlockStats& b : blocks)
      if (b.word) words << *b.word << '\n';
  }
  {
    io::CsvWriter csv(join_path(out_dir, "words_offsets.csv"));
    csv.row({"stage", "j", "offset"});
    for (long n = 0; n < o.stages; ++n) {
      const std::vector<rankone::Int> offsets = rankone::occurrence_offsets(params, n);
      for (std::size_t j = 0; j < offsets.size(); ++j)
        csv.row({fmt(n), fmt(static_cast<std::uint64_t>(j)), offsets[j].get_str()});
    }
  }
  report.kv("height", blocks.back().height.get_str());

  if (o.stages >= 3) {
    const rankone::InfiniteVerdict verdict =
        rankone::is_infinite(params, o.stages, o.infinite_threshold);
    report.kv("ones_to_zeros", verdict.curve.back());
    report.kv("verdict", verdict.verdict);
  }
  if (o.depth != 0) {
    const rankone::PeriodicityReport pr =
        rankone::periodicity_report(params, o.depth, o.max_period, o.cap);
    report.kv("periodicity", pr.status);
    report.kv("periodicity_witnesses", static_cast<std::uint64_t>(pr.witnesses.size()));
  }
  report.write(join_path(out_dir, "words_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// measure
// ---------------------------------------------------------------------------
struct MeasureOpts {
  std::string params_file;
  std::string word;
  long stages = 6;
  std::uint64_t cap = rankone::kDefaultLengthCap;
};

int run_measure(const MeasureOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  for (const std::string& v : rankone::validate_params_file(o.params_file))
    viol.push_back("params: " + v);
  if (o.stages < 1) viol.push_back("stages: must be >= 1");
  if (o.word.empty()) viol.push_back("word: must be nonempty");
  for (char c : o.word)
    if (c != '0' && c != '1') {
      viol.push_back("word: must be over {0,1}");
      break;
    }
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const rankone::RankOneParams params = rankone::load_params(o.params_file);
  const rankone::MeasureSeries series =
      rankone::cylinder_measure(params, o.word, o.stages, o.cap);
  io::CsvWriter csv(join_path(out_dir, "measure_series.csv"));
  csv.row({"stage", "ratio"});
  for (std::size_t i = 0; i < series.stages.size(); ++i)
    csv.row({fmt(series.stages[i]), fmt(series.ratios[i])});

  Report report("measure");
  report.kv("name", params.name);
  report.kv("word", o.word);
  report.kv("estimate", series.estimate);
  report.write(join_path(out_dir, "measure_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// avg
// ---------------------------------------------------------------------------
struct AvgOpts {
  ModelOpts model;
  std::string observable = "const:1";
  std::string weight = "mobius";
  std::string checkpoints = "1000,10000";
  bool cesaro = false;
  double z_value = 0.0;
};

int run_avg(const AvgOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  std::vector<std::uint64_t> cps;
  model_violations(o.model, viol);
  observable_violations(o.model, o.observable, viol);
  checkpoint_violations(o.checkpoints, viol, &cps);
  try {
    orbits::weight_from_name(o.weight);
  } catch (const std::exception& e) {
    viol.push_back(std::string("weight: ") + e.what());
  }
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const orbits::OrbitModel model = build_model(o.model);
  const orbits::Observable f = parse_observable(o.observable);
  const orbits::Weight weight = orbits::weight_from_name(o.weight);

  std::optional<numtheory::ArithmeticTable> table;
  if (needs_table(f, weight)) table = numtheory::sieve(table_limit_for(o.model, f, cps.back()));

  const orbits::AverageSeries series =
      o.cesaro ? orbits::cesaro_deviation(model, f, o.z_value, cps,
                                          table ? &*table : nullptr)
               : orbits::weighted_average(model, f, cps, weight, table ? &*table : nullptr);

  io::CsvWriter csv(join_path(out_dir, "avg_series.csv"));
  csv.row({"N", "value", "weight", "model", "observable"});
  for (std::size_t i = 0; i < series.checkpoints.size(); ++i)
    csv.row({fmt(series.checkpoints[i]), fmt(series.values[i]),
             orbits::weight_name(series.weight), series.model, series.observable});

  Report report("avg");
  report.kv("model", series.model);
  report.kv("observable", series.observable);
  report.kv("weight", orbits::weight_name(series.weight));
  if (o.cesaro) report.kv("z_value", o.z_value);
  report.kv("final", series.values.back());
  report.kv("sup_f", orbits::sup_abs(f));
  report.write(join_path(out_dir, "avg_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// hopf
// ---------------------------------------------------------------------------
struct HopfOpts {
  ModelOpts model;
  std::string observable;
  std::string density;
  std::string weight = "none";
  std::string checkpoints = "1000,10000";
  double integral_f = 0.0;
  double integral_p = 0.0;
  bool have_integral_f = false;
  bool have_integral_p = false;
};

int run_hopf(const HopfOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  std::vector<std::uint64_t> cps;
  model_violations(o.model, viol);
  observable_violations(o.model, o.observable, viol);
  observable_violations(o.model, o.density, viol);
  checkpoint_violations(o.checkpoints, viol, &cps);
  try {
    orbits::weight_from_name(o.weight);
  } catch (const std::exception& e) {
    viol.push_back(std::string("weight: ") + e.what());
  }
  if (o.have_integral_f != o.have_integral_p)
    viol.push_back("integral-f/integral-p: supply both or neither");
  if (o.have_integral_p && o.integral_p == 0.0)
    viol.push_back("integral-p: must be nonzero");
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const orbits::OrbitModel model = build_model(o.model);
  const orbits::Observable f = parse_observable(o.observable);
  const orbits::Observable p = parse_observable(o.density);
  const orbits::Weight weight = orbits::weight_from_name(o.weight);

  std::optional<numtheory::ArithmeticTable> table;
  if (needs_table(f, weight) || needs_table(p, orbits::Weight::none))
    table = numtheory::sieve(table_limit_for(o.model, f, cps.back()));

  const orbits::HopfResult result = orbits::hopf_ratio(
      model, f, p, cps, weight, table ? &*table : nullptr,
      o.have_integral_f ? std::optional<double>(o.integral_f) : std::nullopt,
      o.have_integral_p ? std::optional<double>(o.integral_p) : std::nullopt);

  io::CsvWriter csv(join_path(out_dir, "hopf_series.csv"));
  csv.row({"N", "value", "weight", "model", "observable"});
  for (std::size_t i = 0; i < result.series.checkpoints.size(); ++i)
    csv.row({fmt(result.series.checkpoints[i]), fmt(result.series.values[i]),
             orbits::weight_name(result.series.weight), result.series.model,
             result.series.observable});

  Report report("hopf");
  report.kv("model", result.series.model);
  report.kv("observable", result.series.observable);
  report.kv("weight", orbits::weight_name(result.series.weight));
  report.kv("final", result.series.values.back());
  if (result.bound) report.kv("bound", *result.bound);
  report.write(join_path(out_dir, "hopf_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// dkbsz
// ---------------------------------------------------------------------------
struct DkbszOpts {
  ModelOpts model;
  std::string observable;
  std::uint64_t p = 2;
  std::uint64_t q = 3;
  std::string checkpoints = "100,1000";
  std::uint64_t grid = 16384;
};

int run_dkbsz(const DkbszOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  std::vector<std::uint64_t> cps;
  model_violations(o.model, viol);
  observable_violations(o.model, o.observable, viol);
  checkpoint_violations(o.checkpoints, viol, &cps);
  if (!is_prime(o.p)) viol.push_back("p: " + std::to_string(o.p) + " is not prime");
  if (!is_prime(o.q)) viol.push_back("q: " + std::to_string(o.q) + " is not prime");
  if (o.p == o.q) viol.push_back("p,q: primes must be distinct");
  grid_violations(o.grid, viol);
  const std::uint64_t mx = std::max(o.p, o.q);
  if (!cps.empty()) {
    if (cps.front() < mx) viol.push_back("checkpoints: first N must be >= max(p,q)");
    if (o.grid <= 2 * mx * cps.back())
      viol.push_back("grid: must exceed 2*max(p,q)*N = " + std::to_string(2 * mx * cps.back()));
  }
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const orbits::OrbitModel model = build_model(o.model);
  const orbits::Observable f = parse_observable(o.observable);
  const std::uint64_t reach = mx * cps.back();

  std::optional<numtheory::ArithmeticTable> table;
  if (needs_table(f, orbits::Weight::none))
    table = numtheory::sieve(table_limit_for(o.model, f, reach));

  const std::vector<double> fv = orbits::orbit_values(model, f, reach, table ? &*table : nullptr);

  io::CsvWriter csv(join_path(out_dir, "dkbsz_series.csv"));
  csv.row({"N", "corr", "n_tilde", "lhs", "rhs", "hellinger", "holds"});
  double acc = 0.0;
  std::uint64_t n = 1;
  bool all_hold = true;
  double last_h = 0.0;
  for (std::uint64_t cp : cps) {
    for (; n <= cp; ++n) acc += fv[o.p * n] * fv[o.q * n];
    const spectral::DkbszBound bound = spectral::dkbsz_bound(fv, o.p, o.q, cp, o.grid);
    all_hold = all_hold && bound.holds;
    last_h = bound.hellinger;
    csv.row({fmt(cp), fmt(acc / static_cast<double>(cp)), fmt(bound.n_tilde), fmt(bound.lhs),
             fmt(bound.rhs), fmt(bound.hellinger), fmt(bound.holds ? 1 : 0)});
  }

  Report report("dkbsz");
  report.kv("model", orbits::model_label(model));
  report.kv("observable", orbits::observable_label(f));
  report.kv("p", o.p);
  report.kv("q", o.q);
  report.kv("grid", o.grid);
  report.kv("holds", all_hold ? "true" : "false");
  report.kv("hellinger", last_h);
  report.write(join_path(out_dir, "dkbsz_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// spectra
// ---------------------------------------------------------------------------
struct SpectraOpts {
  std::string params_file;
  long stages = 4;
  std::uint64_t grid = 0;  // 0 = coefficients only
  std::uint64_t budget = 0;  // 0 = default/env
  std::uint64_t pushforward = 1;
  std::uint64_t dilate = 1;
};

int run_spectra(const SpectraOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  for (const std::string& v : rankone::validate_params_file(o.params_file))
    viol.push_back("params: " + v);
  if (o.stages < 1) viol.push_back("stages: must be >= 1");
  if (o.grid != 0) grid_violations(o.grid, viol);
  if (o.pushforward < 1) viol.push_back("pushforward: must be >= 1");
  if (o.dilate < 1) viol.push_back("dilate: must be >= 1");
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const rankone::RankOneParams params = rankone::load_params(o.params_file);
  const std::uint64_t budget = o.budget ? o.budget : spectral::default_budget();
  std::vector<spectral::RieszFactor> factors;
  for (long k = 0; k < o.stages; ++k) factors.push_back(spectral::riesz_factor(params, k));
  spectral::SparseSpectrum spec = spectral::product_coeffs(factors, budget);
  if (o.pushforward > 1) spec = spectral::power_pushforward(spec, o.pushforward);
  if (o.dilate > 1) spec = spectral::pseudo_dilate(spec, o.dilate);

  {
    io::CsvWriter csv(join_path(out_dir, "spectra_coeffs.csv"));
    csv.row({"freq", "re", "im"});
    for (const auto& [freq, amp] : spec.coeffs)
      csv.row({fmt(freq), fmt(amp.real()), fmt(amp.imag())});
  }

  Report report("spectra");
  report.kv("name", params.name);
  report.kv("stages", o.stages);
  report.kv("coefficients", static_cast<std::uint64_t>(spec.coeffs.size()));
  report.kv("c0", spec.c0());
  report.kv("max_frequency", spec.max_frequency());
  if (o.pushforward > 1) report.kv("pushforward", o.pushforward);
  if (o.dilate > 1) report.kv("dilate", o.dilate);
  if (o.grid != 0) {
    const spectral::GridDensity density = spectral::evaluate_density(spec, o.grid);
    io::CsvWriter csv(join_path(out_dir, "spectra_density.csv"));
    csv.row({"t", "value"});
    for (std::uint64_t k = 0; k < density.grid; ++k)
      csv.row({fmt(static_cast<double>(k) / static_cast<double>(density.grid)),
               fmt(density.samples[k])});
    report.kv("grid", o.grid);
    report.kv("grid_mean", density.mean());
  }
  report.write(join_path(out_dir, "spectra_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// hellinger
// ---------------------------------------------------------------------------
struct HellingerOpts {
  std::string params_file;
  long stages = 4;
  std::uint64_t p = 2;
  std::uint64_t q = 3;
  std::uint64_t grid = 32768;
  std::uint64_t budget = 0;
};

int run_hellinger(const HellingerOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  for (const std::string& v : rankone::validate_params_file(o.params_file))
    viol.push_back("params: " + v);
  if (o.stages < 1) viol.push_back("stages: must be >= 1");
  if (o.p < 1) viol.push_back("p: must be >= 1");
  if (o.q < 1) viol.push_back("q: must be >= 1");
  grid_violations(o.grid, viol);
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const rankone::RankOneParams params = rankone::load_params(o.params_file);
  const std::uint64_t budget = o.budget ? o.budget : spectral::default_budget();

  io::CsvWriter csv(join_path(out_dir, "hellinger_series.csv"));
  csv.row({"stages", "affinity"});
  double last = 1.0;
  std::vector<spectral::RieszFactor> factors;
  for (long k = 0; k < o.stages; ++k) {
    factors.push_back(spectral::riesz_factor(params, k));
    const spectral::SparseSpectrum prod = spectral::product_coeffs(factors, budget);
    const spectral::GridDensity da =
        spectral::evaluate_density(spectral::pseudo_dilate(prod, o.p), o.grid);
    const spectral::GridDensity db =
        spectral::evaluate_density(spectral::pseudo_dilate(prod, o.q), o.grid);
    last = spectral::hellinger(da, db);
    csv.row({fmt(k + 1), fmt(last)});
  }

  Report report("hellinger");
  report.kv("name", params.name);
  report.kv("stages", o.stages);
  report.kv("p", o.p);
  report.kv("q", o.q);
  report.kv("grid", o.grid);
  report.kv("affinity", last);
  report.write(join_path(out_dir, "hellinger_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// klemes
// ---------------------------------------------------------------------------
struct KlemesOpts {
  std::string params_file;
  int eta = 0;
  long count = 10;
  long stride = 3;
  long truncation = 0;  // 0 = deepest budget-feasible
  std::uint64_t budget = 0;
};

int run_klemes(const KlemesOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  for (const std::string& v : rankone::validate_params_file(o.params_file))
    viol.push_back("params: " + v);
  if (o.eta < 0) viol.push_back("eta: must be >= 0");
  if (o.count < 1) viol.push_back("count: must be >= 1");
  if (o.stride < 3) viol.push_back("stride: must be >= 3 (gap condition)");
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const rankone::RankOneParams params = rankone::load_params(o.params_file);
  const std::uint64_t budget = o.budget ? o.budget : spectral::default_budget();
  const spectral::SubsequencePlan plan =
      spectral::SubsequencePlan::arithmetic(o.eta, o.count, o.stride);
  const spectral::KlemesReport report_data =
      spectral::klemes_reinhold_check(params, plan, o.truncation, budget);

  {
    io::CsvWriter csv(join_path(out_dir, "klemes_alpha.csv"));
    csv.row({"K", "j", "m", "alpha", "inv_p", "abs_err"});
    for (std::size_t k = 0; k < report_data.alpha_by_k.size(); ++k)
      for (std::size_t j = 0; j < report_data.m.size(); ++j) {
        const double alpha = report_data.alpha_by_k[k][j];
        const double inv_p = 1.0 / static_cast<double>(report_data.p[j]);
        csv.row({fmt(static_cast<std::uint64_t>(k + 1)), fmt(static_cast<std::uint64_t>(j)),
                 report_data.m[j].get_str(), fmt(alpha), fmt(inv_p), fmt(std::abs(alpha - inv_p))});
      }
  }
  {
    io::CsvWriter csv(join_path(out_dir, "klemes_increments.csv"));
    csv.row({"K", "j", "increment"});
    for (std::size_t k = 1; k < report_data.alpha_by_k.size(); ++k)
      for (std::size_t j = 0; j < report_data.m.size(); ++j)
        csv.row({fmt(static_cast<std::uint64_t>(k + 1)), fmt(static_cast<std::uint64_t>(j)),
                 fmt(std::abs(report_data.alpha_by_k[k][j] - report_data.alpha_by_k[k - 1][j]))});
  }
  {
    io::CsvWriter csv(join_path(out_dir, "klemes_pairs.csv"));
    csv.row({"j", "k", "pair_sum", "pair_prod", "gap"});
    for (const spectral::KlemesReport::Row& row : report_data.rows) {
      const long k = (row.j + 1) % static_cast<long>(report_data.m.size());
      csv.row({fmt(row.j), fmt(k), fmt(row.pair_sum), fmt(row.pair_prod),
               fmt(std::abs(row.pair_sum - row.pair_prod))});
    }
  }

  Report report("klemes");
  report.kv("name", params.name);
  report.kv("eta", o.eta);
  report.kv("count", o.count);
  report.kv("stride", o.stride);
  report.kv("truncation", report_data.truncation);
  report.kv("budget", budget);
  report.write(join_path(out_dir, "klemes_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// peyriere
// ---------------------------------------------------------------------------
struct PeyriereOpts {
  std::string params_file;
  std::uint64_t p = 2;
  std::uint64_t q = 3;
  int eta = 0;
  long count = 10;
  long stride = 3;
  long truncation = 0;
  std::uint64_t budget = 0;
};

int run_peyriere(const PeyriereOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  for (const std::string& v : rankone::validate_params_file(o.params_file))
    viol.push_back("params: " + v);
  if (o.p < 1) viol.push_back("p: must be >= 1");
  if (o.q < 1) viol.push_back("q: must be >= 1");
  if (o.eta < 0) viol.push_back("eta: must be >= 0");
  if (o.count < 1) viol.push_back("count: must be >= 1");
  if (o.stride < 3) viol.push_back("stride: must be >= 3 (gap condition)");
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const rankone::RankOneParams params = rankone::load_params(o.params_file);
  const std::uint64_t budget = o.budget ? o.budget : spectral::default_budget();
  const spectral::SubsequencePlan plan =
      spectral::SubsequencePlan::arithmetic(o.eta, o.count, o.stride);
  const std::vector<mpz_class> m = spectral::mj_sequence(params, plan);
  const spectral::PlanProduct prod = spectral::plan_product(params, plan, o.truncation, budget);

  const spectral::SparseSpectrum spec_a = spectral::pseudo_dilate(prod.spectrum, o.p);
  const spectral::SparseSpectrum spec_b = spectral::pseudo_dilate(prod.spectrum, o.q);
  std::vector<mpz_class> freqs;
  freqs.reserve(m.size());
  for (const mpz_class& mj : m) freqs.push_back(mpz_class(static_cast<unsigned long>(o.p)) * mj);

  const spectral::PeyriereReport diag =
      spectral::peyriere_diagnostics(spec_a, spec_b, freqs, m.size());

  io::CsvWriter csv(join_path(out_dir, "peyriere_series.csv"));
  csv.row({"index", "br2", "br1_a", "br1_b"});
  for (std::size_t i = 0; i < diag.br2.size(); ++i)
    csv.row({fmt(static_cast<std::uint64_t>(i + 1)), fmt(diag.br2[i]), fmt(diag.br1_a[i]),
             fmt(diag.br1_b[i])});

  Report report("peyriere");
  report.kv("name", params.name);
  report.kv("p", o.p);
  report.kv("q", o.q);
  report.kv("count", o.count);
  report.kv("truncation", prod.truncation);
  report.kv("br2_final", diag.br2.back());
  report.kv("br1_a_final", diag.br1_a.back());
  report.kv("br1_b_final", diag.br1_b.back());
  report.write(join_path(out_dir, "peyriere_summary.txt"));
  return 0;
}

// ---------------------------------------------------------------------------
// divergence
// ---------------------------------------------------------------------------
struct DivergenceOpts {
  std::string params_file;
  int modulus = 3;
  long horizon = 30;
};

int run_divergence(const DivergenceOpts& o, const std::string& out_dir, bool validate_only) {
  std::vector<std::string> viol;
  for (const std::string& v : rankone::validate_params_file(o.params_file))
    viol.push_back("params: " + v);
  if (o.modulus < 1) viol.push_back("modulus: must be >= 1");
  if (o.horizon < o.modulus) viol.push_back("horizon: must be >= modulus");
  if (const int rc = settle_validation(viol, validate_only); rc >= 0) return rc;

  const rankone::RankOneParams params = rankone::load_params(o.params_file);
  const spectral::DivergenceReport diag =
      spectral::divergence_residue(params, o.modulus, o.horizon);

  io::CsvWriter csv(join_path(out_dir, "divergence_sums.csv"));
  csv.row({"eta", "sum"});
  for (std::size_t eta = 0; eta < diag.sums.size(); ++eta)
    csv.row({fmt(static_cast<std::uint64_t>(eta)), fmt(diag.sums[eta])});

  Report report("divergence");
  report.kv("name", params.name);
  report.kv("modulus", o.modulus);
  report.kv("horizon", o.horizon);
  report.kv("best_eta", diag.best_eta);
  report.write(join_path(out_dir, "divergence_summary.txt"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-one spectral measures, sieves, and disjointness diagnostics"};
  app.require_subcommand(1);
  bool validate_only = false;
  std::string out_dir = ".";
  app.add_flag("--validate-only", validate_only,
               "check the configuration, print violations, and exit without running");
  app.add_option("--out", out_dir, "output directory (created if missing)")
      ->capture_default_str();

  SieveOpts sieve_opts;
  CLI::App* sieve_cmd = app.add_subcommand("sieve", "Mobius/Liouville table and Mertens sums");
  sieve_cmd->add_option("--limit", sieve_opts.limit, "sieve limit N");
  sieve_cmd->add_option("--grid", sieve_opts.grid, "grid for the twisted exponential-sum scan");
  sieve_cmd->add_option("--checkpoints", sieve_opts.checkpoints, "scan checkpoints, e.g. 1000,10000");
  sieve_cmd->add_option("--cache", sieve_opts.cache_out, "write a binary mu cache");
  sieve_cmd->add_option("--from-cache", sieve_opts.cache_in, "load the table from a binary cache");

  WordsOpts words_opts;
  CLI::App* words_cmd = app.add_subcommand("words", "rank-one building blocks and copy offsets");
  words_cmd->add_option("--params", words_opts.params_file, "parameter file (JSON)")->required();
  words_cmd->add_option("--stages", words_opts.stages, "stages to build")->capture_default_str();
  words_cmd->add_option("--cap", words_opts.cap, "word materialization cap")->capture_default_str();
  words_cmd->add_option("--infinite-threshold", words_opts.infinite_threshold,
                        "ones/zeros ratio threshold for the infinite verdict")
      ->capture_default_str();
  words_cmd->add_option("--depth", words_opts.depth, "periodicity scan depth (0 = skip)");
  words_cmd->add_option("--max-period", words_opts.max_period, "largest period to scan")
      ->capture_default_str();

  MeasureOpts measure_opts;
  CLI::App* measure_cmd = app.add_subcommand("measure", "cylinder measure estimates");
  measure_cmd->add_option("--params", measure_opts.params_file, "parameter file (JSON)")
      ->required();
  measure_cmd->add_option("--word", measure_opts.word, "cylinder word over {0,1}")->required();
  measure_cmd->add_option("--stages", measure_opts.stages, "estimate stages")
      ->capture_default_str();
  measure_cmd->add_option("--cap", measure_opts.cap, "word materialization cap")
      ->capture_default_str();

  AvgOpts avg_opts;
  CLI::App* avg_cmd = app.add_subcommand("avg", "weighted Birkhoff averages");
  add_model_options(avg_cmd, avg_opts.model);
  avg_cmd->add_option("--observable", avg_opts.observable, "observable spec")
      ->capture_default_str();
  avg_cmd->add_option("--weight", avg_opts.weight, "none | mobius | liouville")
      ->capture_default_str();
  avg_cmd->add_option("--checkpoints", avg_opts.checkpoints, "ascending N list")
      ->capture_default_str();
  avg_cmd->add_flag("--cesaro", avg_opts.cesaro, "Cesaro deviation from --z instead of a weighted average");
  avg_cmd->add_option("--z", avg_opts.z_value, "deviation center for --cesaro")
      ->capture_default_str();

  HopfOpts hopf_opts;
  CLI::App* hopf_cmd = app.add_subcommand("hopf", "Hopf ratio averages");
  add_model_options(hopf_cmd, hopf_opts.model);
  hopf_cmd->add_option("--observable", hopf_opts.observable, "numerator observable")->required();
  hopf_cmd->add_option("--density", hopf_opts.density, "denominator observable")->required();
  hopf_cmd->add_option("--weight", hopf_opts.weight, "none | mobius | liouville")
      ->capture_default_str();
  hopf_cmd->add_option("--checkpoints", hopf_opts.checkpoints, "ascending N list")
      ->capture_default_str();
  hopf_cmd->add_option("--integral-f", hopf_opts.integral_f, "integral of f (for the bound)");
  hopf_cmd->add_option("--integral-p", hopf_opts.integral_p, "integral of p (for the bound)");

  DkbszOpts dkbsz_opts;
  CLI::App* dkbsz_cmd =
      app.add_subcommand("dkbsz", "prime cross-correlations and the Hellinger bound");
  add_model_options(dkbsz_cmd, dkbsz_opts.model);
  dkbsz_cmd->add_option("--observable", dkbsz_opts.observable, "observable spec")->required();
  dkbsz_cmd->add_option("--p", dkbsz_opts.p, "first prime")->capture_default_str();
  dkbsz_cmd->add_option("--q", dkbsz_opts.q, "second prime")->capture_default_str();
  dkbsz_cmd->add_option("--checkpoints", dkbsz_opts.checkpoints, "ascending N list")
      ->capture_default_str();
  dkbsz_cmd->add_option("--grid", dkbsz_opts.grid, "density grid (power of two, > 2*max(p,q)*N)")
      ->capture_default_str();

  SpectraOpts spectra_opts;
  CLI::App* spectra_cmd =
      app.add_subcommand("spectra", "Riesz-product coefficients and grid densities");
  spectra_cmd->add_option("--params", spectra_opts.params_file, "parameter file (JSON)")
      ->required();
  spectra_cmd->add_option("--stages", spectra_opts.stages, "number of factors")
      ->capture_default_str();
  spectra_cmd->add_option("--grid", spectra_opts.grid, "density grid (0 = coefficients only)");
  spectra_cmd->add_option("--budget", spectra_opts.budget, "coefficient budget override");
  spectra_cmd->add_option("--pushforward", spectra_opts.pushforward,
                          "apply the power push-forward z -> z^p")
      ->capture_default_str();
  spectra_cmd->add_option("--dilate", spectra_opts.dilate,
                          "apply the pseudo-dilation by m (after any push-forward)")
      ->capture_default_str();

  HellingerOpts hellinger_opts;
  CLI::App* hellinger_cmd =
      app.add_subcommand("hellinger", "affinity between pseudo-dilated truncated products");
  hellinger_cmd->add_option("--params", hellinger_opts.params_file, "parameter file (JSON)")
      ->required();
  hellinger_cmd->add_option("--stages", hellinger_opts.stages, "deepest truncation")
      ->capture_default_str();
  hellinger_cmd->add_option("--p", hellinger_opts.p, "first dilation")->capture_default_str();
  hellinger_cmd->add_option("--q", hellinger_opts.q, "second dilation")->capture_default_str();
  hellinger_cmd->add_option("--grid", hellinger_opts.grid, "density grid (power of two)")
      ->capture_default_str();
  hellinger_cmd->add_option("--budget", hellinger_opts.budget, "coefficient budget override");

  KlemesOpts klemes_opts;
  CLI::App* klemes_cmd =
      app.add_subcommand("klemes", "Fourier coefficients at the m_j frequencies");
  klemes_cmd->add_option("--params", klemes_opts.params_file, "parameter file (JSON)")
      ->required();
  klemes_cmd->add_option("--eta", klemes_opts.eta, "plan residue class")->capture_default_str();
  klemes_cmd->add_option("--count", klemes_opts.count, "plan length J")->capture_default_str();
  klemes_cmd->add_option("--stride", klemes_opts.stride, "plan stride (>= 3)")
      ->capture_default_str();
  klemes_cmd->add_option("--truncation", klemes_opts.truncation,
                         "plan stages to multiply (0 = deepest budget-feasible)")
      ->capture_default_str();
  klemes_cmd->add_option("--budget", klemes_opts.budget, "coefficient budget override");

  PeyriereOpts peyriere_opts;
  CLI::App* peyriere_cmd =
      app.add_subcommand("peyriere", "Brown-Hewitt series for a pseudo-dilation pair");
  peyriere_cmd->add_option("--params", peyriere_opts.params_file, "parameter file (JSON)")
      ->required();
  peyriere_cmd->add_option("--p", peyriere_opts.p, "first dilation")->capture_default_str();
  peyriere_cmd->add_option("--q", peyriere_opts.q, "second dilation")->capture_default_str();
  peyriere_cmd->add_option("--eta", peyriere_opts.eta, "plan residue class")
      ->capture_default_str();
  peyriere_cmd->add_option("--count", peyriere_opts.count, "plan length J")
      ->capture_default_str();
  peyriere_cmd->add_option("--stride", peyriere_opts.stride, "plan stride (>= 3)")
      ->capture_default_str();
  peyriere_cmd->add_option("--truncation", peyriere_opts.truncation,
                           "plan stages to multiply (0 = deepest budget-feasible)")
      ->capture_default_str();
  peyriere_cmd->add_option("--budget", peyriere_opts.budget, "coefficient budget override");

  DivergenceOpts divergence_opts;
  CLI::App* divergence_cmd =
      app.add_subcommand("divergence", "sum of 1/p_n^2 split by residue class");
  divergence_cmd->add_option("--params", divergence_opts.params_file, "parameter file (JSON)")
      ->required();
  divergence_cmd->add_option("--modulus", divergence_opts.modulus, "residue modulus")
      ->capture_default_str();
  divergence_cmd->add_option("--horizon", divergence_opts.horizon, "largest stage n")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  hopf_opts.have_integral_f = hopf_cmd->count("--integral-f") > 0;
  hopf_opts.have_integral_p = hopf_cmd->count("--integral-p") > 0;

  try {
    if (!validate_only) std::filesystem::create_directories(out_dir);
    if (app.got_subcommand(sieve_cmd)) return run_sieve(sieve_opts, out_dir, validate_only);
    if (app.got_subcommand(words_cmd)) return run_words(words_opts, out_dir, validate_only);
    if (app.got_subcommand(measure_cmd)) return run_measure(measure_opts, out_dir, validate_only);
    if (app.got_subcommand(avg_cmd)) return run_avg(avg_opts, out_dir, validate_only);
    if (app.got_subcommand(hopf_cmd)) return run_hopf(hopf_opts, out_dir, validate_only);
    if (app.got_subcommand(dkbsz_cmd)) return run_dkbsz(dkbsz_opts, out_dir, validate_only);
    if (app.got_subcommand(spectra_cmd)) return run_spectra(spectra_opts, out_dir, validate_only);
    if (app.got_subcommand(hellinger_cmd))
      return run_hellinger(hellinger_opts, out_dir, validate_only);
    if (app.got_subcommand(klemes_cmd)) return run_klemes(klemes_opts, out_dir, validate_only);
    if (app.got_subcommand(peyriere_cmd))
      return run_peyriere(peyriere_opts, out_dir, validate_only);
    if (app.got_subcommand(divergence_cmd))
      return run_divergence(divergence_opts, out_dir, validate_only);
  } catch (const mobius::ResourceError& e) {
    std::cerr << "error: resource: " << e.what() << '\n';
    return 3;
  } catch (const mobius::OrbitError& e) {
    std::cerr << "error: orbit: " << e.what() << '\n';
    return 4;
  } catch (const mobius::UndefinedRatioError& e) {
    std::cerr << "error: orbit: " << e.what() << '\n';
    return 4;
  } catch (const mobius::DegenerateCylinderError& e) {
    std::cerr << "error: orbit: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: validation: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: runtime: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
