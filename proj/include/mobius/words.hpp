#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mobius/errors.hpp"

namespace mobius::rankone {

using Int = mpz_class;

inline constexpr std::uint64_t kDefaultLengthCap = 10'000'000;

// ---------------------------------------------------------------------------
// Stage rules: tiny arithmetic expressions over {constants, n, p_n, h_n} with
// + and * (the middle dot is accepted as a synonym for *).
// ---------------------------------------------------------------------------
struct RuleExpr {
  enum class Kind { constant, var_n, var_p, var_h, add, mul };
  struct Node {
    Kind kind = Kind::constant;
    Int value = 0;
    std::vector<Node> kids;
  };
  Node root;
  std::string text;
  bool references_p = false;

  static RuleExpr parse(std::string_view src) {
    Parser p{src, 0};
    RuleExpr e;
    e.text = std::string(src);
    e.root = p.expr();
    p.skip_ws();
    if (p.pos != p.src.size())
      throw std::invalid_argument("rule: trailing input at '" + std::string(p.src.substr(p.pos)) + "'");
    mark(e.root, e.references_p);
    return e;
  }

  Int eval(long n, const Int& p_n, const Int& h_n) const { return eval_node(root, n, p_n, h_n); }

 private:
  struct Parser {
    std::string_view src;
    std::size_t pos;

    void skip_ws() {
      while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eat(std::string_view tok) {
      skip_ws();
      if (src.substr(pos, tok.size()) == tok) {
        pos += tok.size();
        return true;
      }
      return false;
    }
    Node expr() {
      Node lhs = term();
      while (true) {
        if (eat("+")) {
          Node n;
          n.kind = Kind::add;
          n.kids.push_back(std::move(lhs));
          n.kids.push_back(term());
          lhs = std::move(n);
        } else {
          return lhs;
        }
      }
    }
    Node term() {
      Node lhs = atom();
      while (true) {
        if (eat("*") || eat("\xc2\xb7")) {  // '*' or U+00B7
          Node n;
          n.kind = Kind::mul;
          n.kids.push_back(std::move(lhs));
          n.kids.push_back(atom());
          lhs = std::move(n);
        } else {
          return lhs;
        }
      }
    }
    Node atom() {
      skip_ws();
      if (pos >= src.size()) throw std::invalid_argument("rule: unexpected end of input");
      if (eat("(")) {
        Node inner = expr();
        if (!eat(")")) throw std::invalid_argument("rule: missing ')'");
        return inner;
      }
      Node n;
      if (eat("p_n")) {
        n.kind = Kind::var_p;
        return n;
      }
      if (eat("h_n")) {
        n.kind = Kind::var_h;
        return n;
      }
      if (eat("n")) {
        n.kind = Kind::var_n;
        return n;
      }
      if (std::isdigit(static_cast<unsigned char>(src[pos]))) {
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        n.kind = Kind::constant;
        n.value = Int(std::string(src.substr(start, pos - start)));
        return n;
      }
      throw std::invalid_argument("rule: unexpected character '" + std::string(1, src[pos]) + "'");
    }
  };

  static void mark(const Node& n, bool& refs_p) {
    if (n.kind == Kind::var_p) refs_p = true;
    for (const Node& k : n.kids) mark(k, refs_p);
  }

  static Int eval_node(const Node& node, long n, const Int& p_n, const Int& h_n) {
    switch (node.kind) {
      case Kind::constant:
        return node.value;
      case Kind::var_n:
        return Int(n);
      case Kind::var_p:
        return p_n;
      case Kind::var_h:
        return h_n;
      case Kind::add:
        return eval_node(node.kids[0], n, p_n, h_n) + eval_node(node.kids[1], n, p_n, h_n);
      case Kind::mul:
        return eval_node(node.kids[0], n, p_n, h_n) * eval_node(node.kids[1], n, p_n, h_n);
    }
    throw std::logic_error("rule: bad node");
  }
};

// ---------------------------------------------------------------------------
// Construction parameters: p_n per stage and spacers s(n, 0..p_n-1).
// ---------------------------------------------------------------------------
struct CuttingSpec {
  enum class Kind { constant, list, rule };
  Kind kind = Kind::constant;
  std::uint64_t value = 2;
  std::vector<std::uint64_t> values;  // stage-indexed; the last entry repeats
  RuleExpr rule;                      // may reference n and h_n, not p_n
};

struct SpacerSpec {
  enum class Kind { table, rule };
  Kind kind = Kind::table;
  std::vector<std::vector<Int>> rows;  // one row => every stage; else stage-indexed, last repeats
  std::vector<RuleExpr> exprs;         // one expression per spacer slot
};

struct RankOneParams {
  std::string name;
  CuttingSpec cutting;
  SpacerSpec spacers;

  std::uint64_t cutting_at(long n, const Int& h_n) const {
    Int p;
    switch (cutting.kind) {
      case CuttingSpec::Kind::constant:
        p = Int(static_cast<unsigned long>(cutting.value));
        break;
      case CuttingSpec::Kind::list: {
        if (cutting.values.empty())
          throw std::invalid_argument("invalid parameters: empty cutting list");
        const std::size_t i = std::min<std::size_t>(n, cutting.values.size() - 1);
        p = Int(static_cast<unsigned long>(cutting.values[i]));
        break;
      }
      case CuttingSpec::Kind::rule:
        if (cutting.rule.references_p)
          throw std::invalid_argument("invalid parameters: cutting rule cannot reference p_n");
        p = cutting.rule.eval(n, 0, h_n);
        break;
    }
    if (p < 2)
      throw std::invalid_argument("invalid parameters: p_" + std::to_string(n) + " = " +
                                  p.get_str() + " < 2");
    if (!p.fits_ulong_p() || p.get_ui() > (1u << 20))
      throw std::invalid_argument("invalid parameters: p_" + std::to_string(n) + " too large");
    return p.get_ui();
  }

  std::vector<Int> spacers_at(long n, std::uint64_t p, const Int& h_n) const {
    std::vector<Int> s;
    s.reserve(p);
    if (spacers.kind == SpacerSpec::Kind::table) {
      if (spacers.rows.empty()) throw std::invalid_argument("invalid parameters: empty spacer table");
      const std::size_t i =
          spacers.rows.size() == 1 ? 0 : std::min<std::size_t>(n, spacers.rows.size() - 1);
      const auto& row = spacers.rows[i];
      if (row.size() != p)
        throw std::invalid_argument("invalid parameters: stage " + std::to_string(n) +
                                    " spacer row has " + std::to_string(row.size()) +
                                    " entries, expected p_n = " + std::to_string(p));
      s = row;
    } else {
      // A single rule broadcasts to every slot (needed when p_n varies by stage).
      if (spacers.exprs.size() != p && spacers.exprs.size() != 1)
        throw std::invalid_argument("invalid parameters: stage " + std::to_string(n) + " needs " +
                                    std::to_string(p) + " spacer rules, got " +
                                    std::to_string(spacers.exprs.size()));
      const Int pn(static_cast<unsigned long>(p));
      if (spacers.exprs.size() == 1) {
        for (std::uint64_t j = 0; j < p; ++j) s.push_back(spacers.exprs[0].eval(n, pn, h_n));
      } else {
        for (const RuleExpr& e : spacers.exprs) s.push_back(e.eval(n, pn, h_n));
      }
    }
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s[j] < 0)
        throw std::invalid_argument("invalid parameters: s(" + std::to_string(n) + "," +
                                    std::to_string(j) + ") < 0");
    return s;
  }
};

// ---------------------------------------------------------------------------
// Building blocks W_n and their statistics.
// ---------------------------------------------------------------------------
struct BlockStats {
  long stage = 0;
  Int height = 1;
  Int zeros = 1;
  Int ones = 0;
  std::optional<std::string> word;  // present while height <= length cap
};

namespace detail {

inline void append_run(std::string& w, const Int& count, std::uint64_t cap) {
  if (!count.fits_ulong_p() || w.size() + count.get_ui() > cap)
    throw std::logic_error("word materialization exceeded cap");  // guarded by callers
  w.append(count.get_ui(), '1');
}

}  // namespace detail

// W_0 = "0"; W_{n+1} = W_n 1^{s(n,0)} W_n 1^{s(n,1)} ... W_n 1^{s(n,p_n-1)}.
inline std::vector<BlockStats> build_blocks(const RankOneParams& params, long stages,
                                            std::uint64_t length_cap = kDefaultLengthCap) {
  if (stages < 1) throw std::invalid_argument("build_blocks: need at least one stage");
  std::vector<BlockStats> out;
  out.reserve(stages + 1);
  BlockStats w0;
  w0.word = "0";
  out.push_back(w0);
  for (long n = 0; n < stages; ++n) {
    const BlockStats& prev = out.back();
    const std::uint64_t p = params.cutting_at(n, prev.height);
    const std::vector<Int> s = params.spacers_at(n, p, prev.height);
    Int total_s = 0;
    for (const Int& si : s) total_s += si;
    BlockStats next;
    next.stage = n + 1;
    next.height = Int(static_cast<unsigned long>(p)) * prev.height + total_s;
    next.zeros = Int(static_cast<unsigned long>(p)) * prev.zeros;
    next.ones = Int(static_cast<unsigned long>(p)) * prev.ones + total_s;
    if (prev.word && next.height <= static_cast<unsigned long>(length_cap)) {
      std::string w;
      w.reserve(next.height.get_ui());
      for (std::uint64_t j = 0; j < p; ++j) {
        w += *prev.word;
        detail::append_run(w, s[j], length_cap);
      }
      next.word = std::move(w);
    }
    out.push_back(std::move(next));
  }
  return out;
}

// Overlapping substring count.
inline std::uint64_t occurrence_count(std::string_view v, std::string_view w) {
  if (v.empty()) throw std::invalid_argument("occurrence_count: empty word");
  std::uint64_t count = 0;
  for (std::size_t i = w.find(v); i != std::string_view::npos; i = w.find(v, i + 1)) ++count;
  return count;
}

inline void check_binary_word(std::string_view v, const char* who) {
  if (v.empty()) throw std::invalid_argument(std::string(who) + ": empty word");
  for (char c : v)
    if (c != '0' && c != '1')
      throw std::invalid_argument(std::string(who) + ": word must be over {0,1}");
}

// Forward prefix of the limit word W_infinity (W_{n+1} starts with W_n because
// the first copy is laid down before any spacer).
inline std::string materialize_prefix(const RankOneParams& params, std::uint64_t length,
                                      std::uint64_t length_cap = kDefaultLengthCap) {
  if (length == 0) throw std::invalid_argument("materialize_prefix: length must be >= 1");
  if (length > length_cap) throw std::invalid_argument("materialize_prefix: length exceeds cap");
  std::string w = "0";
  Int h = 1;
  long n = 0;
  while (w.size() < length) {
    const std::uint64_t p = params.cutting_at(n, h);
    const std::vector<Int> s = params.spacers_at(n, p, h);
    std::string next;
    next.reserve(std::min<std::uint64_t>(length + w.size(), 2 * length));
    for (std::uint64_t j = 0; j < p && next.size() < length; ++j) {
      next += w;
      if (next.size() >= length) break;
      const Int& run = s[j];
      const std::uint64_t room = length - next.size();
      const std::uint64_t take =
          (run.fits_ulong_p() && run.get_ui() <= room) ? run.get_ui() : room;
      next.append(take, '1');
    }
    Int total_s = 0;
    for (const Int& si : s) total_s += si;
    h = Int(static_cast<unsigned long>(p)) * h + total_s;
    w = std::move(next);
    ++n;
  }
  w.resize(length);
  return w;
}

// ---------------------------------------------------------------------------
// Cylinder measure: mu(O_{v,0}) estimated by fr(v, W_n) / fr(0, W_n).
// ---------------------------------------------------------------------------
struct MeasureSeries {
  std::vector<long> stages;
  std::vector<double> ratios;
  double estimate = 0.0;
};

inline MeasureSeries cylinder_measure(const RankOneParams& params, std::string_view v, long stages,
                                      std::uint64_t length_cap = kDefaultLengthCap) {
  check_binary_word(v, "cylinder_measure");
  const std::vector<BlockStats> blocks = build_blocks(params, stages, length_cap);
  MeasureSeries out;
  for (const BlockStats& b : blocks) {
    if (!b.word)
      throw std::invalid_argument("cylinder_measure: stage " + std::to_string(b.stage) +
                                  " exceeds the length cap");
    const double fr_v = static_cast<double>(occurrence_count(v, *b.word));
    const double fr_0 = b.zeros.get_d();
    out.stages.push_back(b.stage);
    out.ratios.push_back(fr_v / fr_0);
  }
  out.estimate = out.ratios.back();
  return out;
}

// ---------------------------------------------------------------------------
// Infinite-invariant-measure diagnostic: growth of fr(1, W_n)/fr(0, W_n).
// ---------------------------------------------------------------------------
struct InfiniteVerdict {
  std::vector<double> curve;  // ones/zeros per stage
  bool infinite_suspected = false;
  std::string verdict;
};

inline InfiniteVerdict is_infinite(const RankOneParams& params, long stages, double threshold) {
  if (stages < 3) throw std::invalid_argument("is_infinite: need at least 3 stages");
  // Counts evolve by exact recurrences; no materialization needed.
  std::vector<mpq_class> ratio;
  Int h = 1, zeros = 1, ones = 0;
  ratio.emplace_back(0);
  for (long n = 0; n < stages; ++n) {
    const std::uint64_t p = params.cutting_at(n, h);
    const std::vector<Int> s = params.spacers_at(n, p, h);
    Int total_s = 0;
    for (const Int& si : s) total_s += si;
    h = Int(static_cast<unsigned long>(p)) * h + total_s;
    zeros *= Int(static_cast<unsigned long>(p));
    ones = Int(static_cast<unsigned long>(p)) * ones + total_s;
    ratio.emplace_back(mpq_class(ones) / mpq_class(zeros));
  }
  InfiniteVerdict out;
  for (const mpq_class& r : ratio) out.curve.push_back(r.get_d());
  const std::size_t K = ratio.size() - 1;
  const bool exceeded = ratio[K] > mpq_class(threshold);
  const bool increasing = ratio[K - 2] < ratio[K - 1] && ratio[K - 1] < ratio[K];
  out.infinite_suspected = exceeded && increasing;
  out.verdict = out.infinite_suspected ? "infinite-suspected" : "finite-suspected";
  return out;
}

// ---------------------------------------------------------------------------
// Kalikow-style degeneracy scan of the W_infinity prefix.
// ---------------------------------------------------------------------------
struct PeriodicityReport {
  struct Witness {
    std::uint64_t q = 0;
    std::uint64_t i = 0;  // first index with prefix[i] != prefix[i+q]
  };
  std::uint64_t depth = 0;
  std::uint64_t max_period = 0;
  std::vector<Witness> witnesses;
  std::vector<std::uint64_t> periodic_periods;  // q values with no violation up to depth
  bool aperiodicity_witnessed = false;
  std::string status;
};

inline PeriodicityReport periodicity_report(const RankOneParams& params, std::uint64_t depth,
                                            std::uint64_t max_period,
                                            std::uint64_t length_cap = kDefaultLengthCap) {
  if (depth <= max_period)
    throw std::invalid_argument("periodicity_report: depth must exceed max period");
  const std::string w = materialize_prefix(params, depth, length_cap);
  PeriodicityReport out;
  out.depth = depth;
  out.max_period = max_period;
  for (std::uint64_t q = 1; q <= max_period; ++q) {
    bool violated = false;
    for (std::uint64_t i = 0; i + q < depth; ++i) {
      if (w[i] != w[i + q]) {
        out.witnesses.push_back({q, i});
        violated = true;
        break;
      }
    }
    if (!violated) out.periodic_periods.push_back(q);
  }
  out.aperiodicity_witnessed = out.periodic_periods.empty();
  out.status = out.aperiodicity_witnessed ? "aperiodicity-witnessed" : "periodic-up-to-depth";
  return out;
}

// ---------------------------------------------------------------------------
// Copy offsets of W_n inside W_{n+1}: j*h_n + stilde(n,j), stilde = prefix sums
// of the spacers.
// ---------------------------------------------------------------------------
inline std::vector<Int> occurrence_offsets(const RankOneParams& params, long n) {
  if (n < 0) throw std::invalid_argument("occurrence_offsets: stage must be >= 0");
  Int h = 1;
  for (long k = 0; k < n; ++k) {
    const std::uint64_t p = params.cutting_at(k, h);
    const std::vector<Int> s = params.spacers_at(k, p, h);
    Int total_s = 0;
    for (const Int& si : s) total_s += si;
    h = Int(static_cast<unsigned long>(p)) * h + total_s;
  }
  const std::uint64_t p = params.cutting_at(n, h);
  const std::vector<Int> s = params.spacers_at(n, p, h);
  std::vector<Int> offsets;
  offsets.reserve(p);
  Int stilde = 0;
  for (std::uint64_t j = 0; j < p; ++j) {
    offsets.push_back(Int(static_cast<unsigned long>(j)) * h + stilde);
    stilde += s[j];
  }
  return offsets;
}

// True iff q does not divide (p_n - 1) h_n + sum_j s(n, j).
inline bool prime_condition(const RankOneParams& params, long n, std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("prime_condition: q must be >= 2");
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) throw std::invalid_argument("prime_condition: q must be prime");
  Int h = 1;
  for (long k = 0; k < n; ++k) {
    const std::uint64_t p = params.cutting_at(k, h);
    const std::vector<Int> s = params.spacers_at(k, p, h);
    Int total_s = 0;
    for (const Int& si : s) total_s += si;
    h = Int(static_cast<unsigned long>(p)) * h + total_s;
  }
  const std::uint64_t p = params.cutting_at(n, h);
  const std::vector<Int> s = params.spacers_at(n, p, h);
  Int quantity = Int(static_cast<unsigned long>(p - 1)) * h;
  for (const Int& si : s) quantity += si;
  return !mpz_divisible_ui_p(quantity.get_mpz_t(), q);
}

// ---------------------------------------------------------------------------
// Normalized cylinder [B_n]: the occurrence cylinder of W_n at position 0 with
// the 1/sqrt(mu) scaling.
// ---------------------------------------------------------------------------
struct NormalizedCylinder {
  long stage = 0;
  std::string word;
  long estimate_stage = 0;
  double measure = 0.0;
  double normalization = 0.0;
};

inline NormalizedCylinder normalized_cylinder(const RankOneParams& params, long n,
                                              long estimate_stage = 6,
                                              std::uint64_t length_cap = kDefaultLengthCap) {
  if (n < 0) throw std::invalid_argument("normalized_cylinder: stage must be >= 0");
  if (estimate_stage <= n)
    throw std::invalid_argument("normalized_cylinder: estimate stage must exceed the block stage");
  const std::vector<BlockStats> blocks = build_blocks(params, estimate_stage, length_cap);
  if (!blocks[n].word || !blocks[estimate_stage].word)
    throw std::invalid_argument("normalized_cylinder: words exceed the length cap");
  NormalizedCylinder out;
  out.stage = n;
  out.word = *blocks[n].word;
  out.estimate_stage = estimate_stage;
  const double fr_v =
      static_cast<double>(occurrence_count(out.word, *blocks[estimate_stage].word));
  out.measure = fr_v / blocks[estimate_stage].zeros.get_d();
  if (out.measure <= 0.0)
    throw DegenerateCylinderError("normalized_cylinder: measure estimate vanished at stage " +
                                  std::to_string(n));
  out.normalization = 1.0 / std::sqrt(out.measure);
  return out;
}

}  // namespace mobius::rankone
