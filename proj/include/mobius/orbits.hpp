#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mobius/errors.hpp"
#include "mobius/numtheory.hpp"
#include "mobius/words.hpp"

namespace mobius::orbits {

// ---------------------------------------------------------------------------
// Orbit models.
// ---------------------------------------------------------------------------
struct RankOneSubshift {
  rankone::RankOneParams params;
  enum class Base { canonical, ones };  // forward prefix of W_infinity, or the all-ones point
  Base base = Base::canonical;
};

struct IntegerShift {
  long long start = 0;
};

struct BooleMap {
  double x0 = 0.5;  // x -> x - 1/x
};

using OrbitModel = std::variant<RankOneSubshift, IntegerShift, BooleMap>;

inline constexpr double kBooleBlowupGuard = 1e-12;

// ---------------------------------------------------------------------------
// Observables.
// ---------------------------------------------------------------------------
struct CylinderIndicator {  // subshift only: word v at position k of the shifted point
  std::string word;
  std::uint64_t position = 0;
  bool centered = false;  // subtract the value at the all-ones point
};

struct FinitelySupported {  // integer shift only
  std::map<long long, double> values;
};

struct IntervalIndicator {  // Boole map only
  double lo = 0.0;
  double hi = 1.0;
};

struct CauchyDensity {};  // Boole map only: x -> 1/(pi (1+x^2))

struct ArithmeticObservable {  // integer shift only: mu or lambda at the orbit position
  enum class Fn { mobius, liouville };
  Fn fn = Fn::mobius;
};

struct ConstantObservable {
  double c = 1.0;
};

using Observable = std::variant<CylinderIndicator, FinitelySupported, IntervalIndicator,
                                CauchyDensity, ArithmeticObservable, ConstantObservable>;

enum class Weight { none, mobius, liouville };

inline const char* weight_name(Weight w) {
  switch (w) {
    case Weight::none:
      return "none";
    case Weight::mobius:
      return "mobius";
    case Weight::liouville:
      return "liouville";
  }
  return "?";
}

inline Weight weight_from_name(const std::string& s) {
  if (s == "none") return Weight::none;
  if (s == "mobius") return Weight::mobius;
  if (s == "liouville") return Weight::liouville;
  throw std::invalid_argument("unknown weight: " + s);
}

inline double sup_abs(const Observable& f) {
  struct V {
    double operator()(const CylinderIndicator& c) const { return 1.0; }
    double operator()(const FinitelySupported& fs) const {
      double m = 0.0;
      for (const auto& [k, v] : fs.values) m = std::max(m, std::abs(v));
      return m;
    }
    double operator()(const IntervalIndicator&) const { return 1.0; }
    double operator()(const CauchyDensity&) const { return 1.0 / std::numbers::pi; }
    double operator()(const ArithmeticObservable&) const { return 1.0; }
    double operator()(const ConstantObservable& c) const { return std::abs(c.c); }
  };
  return std::visit(V{}, f);
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string model_label(const OrbitModel& m) {
  struct V {
    std::string operator()(const RankOneSubshift& s) const {
      return "rankone:" + s.params.name +
             (s.base == RankOneSubshift::Base::canonical ? ":canonical" : ":ones");
    }
    std::string operator()(const IntegerShift& s) const {
      return "integer-shift(" + std::to_string(s.start) + ")";
    }
    std::string operator()(const BooleMap& b) const {
      return "boole(" + detail::fmt_double(b.x0) + ")";
    }
  };
  return std::visit(V{}, m);
}

inline std::string observable_label(const Observable& f) {
  struct V {
    std::string operator()(const CylinderIndicator& c) const {
      return std::string(c.centered ? "cylinder_centered(" : "cylinder(") + c.word + "@" +
             std::to_string(c.position) + ")";
    }
    std::string operator()(const FinitelySupported& fs) const {
      return "finitely_supported(" + std::to_string(fs.values.size()) + ")";
    }
    std::string operator()(const IntervalIndicator& iv) const {
      return "interval[" + detail::fmt_double(iv.lo) + "," + detail::fmt_double(iv.hi) + "]";
    }
    std::string operator()(const CauchyDensity&) const { return "cauchy_density"; }
    std::string operator()(const ArithmeticObservable& a) const {
      return a.fn == ArithmeticObservable::Fn::mobius ? "mobius" : "liouville";
    }
    std::string operator()(const ConstantObservable& c) const {
      return "const(" + detail::fmt_double(c.c) + ")";
    }
  };
  return std::visit(V{}, f);
}

// ---------------------------------------------------------------------------
// Orbit evaluation: f(T^n x) for n = 1..count, returned 1-indexed (slot 0 unused).
// The arithmetic table is required for mu/lambda observables.
// ---------------------------------------------------------------------------
inline std::vector<double> orbit_values(const OrbitModel& model, const Observable& f,
                                        std::uint64_t count,
                                        const numtheory::ArithmeticTable* table = nullptr) {
  std::vector<double> out(count + 1, 0.0);

  if (const auto* sub = std::get_if<RankOneSubshift>(&model)) {
    const auto* cyl = std::get_if<CylinderIndicator>(&f);
    const auto* cst = std::get_if<ConstantObservable>(&f);
    if (!cyl && !cst)
      throw std::invalid_argument("rank-one subshift requires a cylinder or constant observable");
    if (cst) {
      std::fill(out.begin() + 1, out.end(), cst->c);
      return out;
    }
    rankone::check_binary_word(cyl->word, "orbit_values");
    const bool all_ones = cyl->word.find('0') == std::string::npos;
    const double base_value = all_ones ? 1.0 : 0.0;  // f at the all-ones point
    const double offset = cyl->centered ? base_value : 0.0;
    if (sub->base == RankOneSubshift::Base::ones) {
      std::fill(out.begin() + 1, out.end(), base_value - offset);
      return out;
    }
    const std::uint64_t need = count + cyl->position + cyl->word.size();
    const std::string prefix = rankone::materialize_prefix(sub->params, need);
    for (std::uint64_t n = 1; n <= count; ++n) {
      const bool hit =
          prefix.compare(n + cyl->position, cyl->word.size(), cyl->word) == 0;
      out[n] = (hit ? 1.0 : 0.0) - offset;
    }
    return out;
  }

  if (const auto* shift = std::get_if<IntegerShift>(&model)) {
    struct V {
      long long pos;
      const numtheory::ArithmeticTable* table;
      double operator()(const FinitelySupported& fs) const {
        const auto it = fs.values.find(pos);
        return it == fs.values.end() ? 0.0 : it->second;
      }
      double operator()(const ArithmeticObservable& a) const {
        if (!table) throw std::invalid_argument("mu/lambda observable needs a sieve table");
        if (pos < 1) return 0.0;
        if (static_cast<std::uint64_t>(pos) > table->limit)
          throw std::invalid_argument("orbit position exceeds the sieve limit");
        return a.fn == ArithmeticObservable::Fn::mobius
                   ? static_cast<double>(table->mu(pos))
                   : static_cast<double>(table->lambda(pos));
      }
      double operator()(const ConstantObservable& c) const { return c.c; }
      double operator()(const CylinderIndicator&) const {
        throw std::invalid_argument("cylinder observable needs a subshift model");
      }
      double operator()(const IntervalIndicator&) const {
        throw std::invalid_argument("interval observable needs the Boole map");
      }
      double operator()(const CauchyDensity&) const {
        throw std::invalid_argument("density observable needs the Boole map");
      }
    };
    for (std::uint64_t n = 1; n <= count; ++n)
      out[n] = std::visit(V{shift->start + static_cast<long long>(n), table}, f);
    return out;
  }

  const auto& boole = std::get<BooleMap>(model);
  if (boole.x0 == 0.0) throw std::invalid_argument("Boole map undefined at x0 = 0");
  struct V {
    double x;
    double operator()(const IntervalIndicator& iv) const {
      return (iv.lo <= x && x <= iv.hi) ? 1.0 : 0.0;
    }
    double operator()(const CauchyDensity&) const {
      return 1.0 / (std::numbers::pi * (1.0 + x * x));
    }
    double operator()(const ConstantObservable& c) const { return c.c; }
    double operator()(const CylinderIndicator&) const {
      throw std::invalid_argument("cylinder observable needs a subshift model");
    }
    double operator()(const FinitelySupported&) const {
      throw std::invalid_argument("finitely-supported observable needs the integer shift");
    }
    double operator()(const ArithmeticObservable&) const {
      throw std::invalid_argument("mu/lambda observable needs the integer shift");
    }
  };
  double x = boole.x0;
  for (std::uint64_t n = 1; n <= count; ++n) {
    if (std::abs(x) < kBooleBlowupGuard)
      throw OrbitError("Boole orbit within 1e-12 of the pole", static_cast<long long>(n));
    x = x - 1.0 / x;
    out[n] = std::visit(V{x}, f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weighted Birkhoff averages and friends.
// ---------------------------------------------------------------------------
struct AverageSeries {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> values;
  Weight weight = Weight::none;
  std::string model;
  std::string observable;
};

namespace detail {

inline void check_checkpoints(const std::vector<std::uint64_t>& cps) {
  if (cps.empty()) throw std::invalid_argument("need at least one checkpoint");
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] == 0) throw std::invalid_argument("checkpoints must be >= 1");
    if (i > 0 && cps[i] <= cps[i - 1])
      throw std::invalid_argument("checkpoints must be strictly ascending");
  }
}

inline const numtheory::ArithmeticTable* require_table(Weight w,
                                                       const numtheory::ArithmeticTable* table,
                                                       std::uint64_t need) {
  if (w == Weight::none) return table;
  if (!table) throw std::invalid_argument("mobius/liouville weights need a sieve table");
  if (table->limit < need)
    throw std::invalid_argument("sieve table limit below the largest checkpoint");
  return table;
}

inline double weight_at(Weight w, const numtheory::ArithmeticTable* table, std::uint64_t n) {
  switch (w) {
    case Weight::none:
      return 1.0;
    case Weight::mobius:
      return static_cast<double>(table->mu(n));
    case Weight::liouville:
      return static_cast<double>(table->lambda(n));
  }
  return 0.0;
}

}  // namespace detail

// values[i] = (1/N_i) sum_{n<=N_i} w(n) f(T^n x)
inline AverageSeries weighted_average(const OrbitModel& model, const Observable& f,
                                      const std::vector<std::uint64_t>& checkpoints, Weight weight,
                                      const numtheory::ArithmeticTable* table = nullptr) {
  detail::check_checkpoints(checkpoints);
  const std::uint64_t N = checkpoints.back();
  detail::require_table(weight, table, N);
  const std::vector<double> fv = orbit_values(model, f, N, table);
  AverageSeries out;
  out.checkpoints = checkpoints;
  out.weight = weight;
  out.model = model_label(model);
  out.observable = observable_label(f);
  double acc = 0.0;
  std::size_t ci = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    acc += detail::weight_at(weight, table, n) * fv[n];
    if (n == checkpoints[ci]) {
      out.values.push_back(acc / static_cast<double>(n));
      ++ci;
    }
  }
  return out;
}

// values[i] = (1/N_i) sum_{n<=N_i} (f(T^n x) - z)
inline AverageSeries cesaro_deviation(const OrbitModel& model, const Observable& f, double z_value,
                                      const std::vector<std::uint64_t>& checkpoints,
                                      const numtheory::ArithmeticTable* table = nullptr) {
  detail::check_checkpoints(checkpoints);
  const std::uint64_t N = checkpoints.back();
  const std::vector<double> fv = orbit_values(model, f, N, table);
  AverageSeries out;
  out.checkpoints = checkpoints;
  out.weight = Weight::none;
  out.model = model_label(model);
  out.observable = observable_label(f);
  double acc = 0.0;
  std::size_t ci = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    acc += fv[n] - z_value;
    if (n == checkpoints[ci]) {
      out.values.push_back(acc / static_cast<double>(n));
      ++ci;
    }
  }
  return out;
}

struct HopfResult {
  AverageSeries series;  // ratio per checkpoint
  std::optional<double> bound;  // integral_f / integral_p when both are supplied
};

// values[i] = sum_{n<=N_i} w(n) f(T^n x) / sum_{n<=N_i} p(T^n x)
inline HopfResult hopf_ratio(const OrbitModel& model, const Observable& f, const Observable& p,
                             const std::vector<std::uint64_t>& checkpoints, Weight weight,
                             const numtheory::ArithmeticTable* table = nullptr,
                             std::optional<double> integral_f = std::nullopt,
                             std::optional<double> integral_p = std::nullopt) {
  detail::check_checkpoints(checkpoints);
  const std::uint64_t N = checkpoints.back();
  detail::require_table(weight, table, N);
  const std::vector<double> fv = orbit_values(model, f, N, table);
  const std::vector<double> pv = orbit_values(model, p, N, table);
  HopfResult out;
  out.series.checkpoints = checkpoints;
  out.series.weight = weight;
  out.series.model = model_label(model);
  out.series.observable = observable_label(f) + "/" + observable_label(p);
  if (integral_f && integral_p) {
    if (*integral_p == 0.0) throw std::invalid_argument("hopf_ratio: integral of p must be nonzero");
    out.bound = std::abs(*integral_f) / *integral_p;
  }
  double num = 0.0, den = 0.0;
  std::size_t ci = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    num += detail::weight_at(weight, table, n) * fv[n];
    den += pv[n];
    if (n == checkpoints[ci]) {
      if (den == 0.0 && ci == 0)
        throw UndefinedRatioError("hopf_ratio: denominator is zero at the first checkpoint");
      out.series.values.push_back(num / den);
      ++ci;
    }
  }
  return out;
}

// values[i] = (1/N_i) sum_{n<=N_i} f(T^{pn} x) f(T^{qn} x)
inline AverageSeries dkbsz_correlation(const OrbitModel& model, const Observable& f,
                                       std::uint64_t p, std::uint64_t q,
                                       const std::vector<std::uint64_t>& checkpoints,
                                       const numtheory::ArithmeticTable* table = nullptr) {
  if (p == q) throw std::invalid_argument("dkbsz_correlation: primes must be distinct");
  if (p < 2 || q < 2) throw std::invalid_argument("dkbsz_correlation: p, q must be >= 2");
  detail::check_checkpoints(checkpoints);
  const std::uint64_t N = checkpoints.back();
  const std::uint64_t reach = std::max(p, q) * N;
  const std::vector<double> fv = orbit_values(model, f, reach, table);
  AverageSeries out;
  out.checkpoints = checkpoints;
  out.weight = Weight::none;
  out.model = model_label(model);
  out.observable = observable_label(f);
  double acc = 0.0;
  std::size_t ci = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    acc += fv[p * n] * fv[q * n];
    if (n == checkpoints[ci]) {
      out.values.push_back(acc / static_cast<double>(n));
      ++ci;
    }
  }
  return out;
}

}  // namespace mobius::orbits
