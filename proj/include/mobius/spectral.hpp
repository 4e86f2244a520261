#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mobius/errors.hpp"
#include "mobius/fourier.hpp"
#include "mobius/rational.hpp"
#include "mobius/words.hpp"

namespace mobius::spectral {

inline constexpr double kAmplitudePrune = 1e-15;  // sparsity floor
inline constexpr double kMergeTolerance = 1e-12;

// Coefficient budget for sparse products; override with MOBIUS_COEFF_BUDGET.
inline std::uint64_t default_budget() {
  if (const char* env = std::getenv("MOBIUS_COEFF_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 10'000'000;
}

// ---------------------------------------------------------------------------
// Riesz factors P_n(t) = (1/sqrt(p_n)) sum_j e^{2 pi i (j h_n + stilde(n,j)) t}.
// ---------------------------------------------------------------------------
struct RieszFactor {
  long stage = 0;
  std::uint64_t p = 2;
  std::vector<std::int64_t> exponents;  // strictly increasing, exponents[0] == 0
  double weight = 0.0;                  // 1/sqrt(p)
};

inline RieszFactor riesz_factor(const rankone::RankOneParams& params, long n) {
  const std::vector<rankone::Int> offsets = rankone::occurrence_offsets(params, n);
  RieszFactor f;
  f.stage = n;
  f.p = offsets.size();
  f.weight = 1.0 / std::sqrt(static_cast<double>(f.p));
  f.exponents.reserve(offsets.size());
  for (const rankone::Int& o : offsets) {
    if (!o.fits_slong_p())
      throw ResourceError("riesz_factor: stage " + std::to_string(n) +
                          " exponents exceed the sparse 64-bit range");
    f.exponents.push_back(o.get_si());
  }
  return f;
}

// ---------------------------------------------------------------------------
// Sparse coefficient maps, sorted by frequency.  Convention throughout:
// chat(n) = integral of e^{-2 pi i n t}.
// ---------------------------------------------------------------------------
struct SparseSpectrum {
  std::vector<std::pair<std::int64_t, std::complex<double>>> coeffs;  // sorted by frequency

  std::complex<double> at(std::int64_t freq) const {
    auto it = std::lower_bound(coeffs.begin(), coeffs.end(), freq,
                               [](const auto& a, std::int64_t f) { return a.first < f; });
    if (it == coeffs.end() || it->first != freq) return {0.0, 0.0};
    return it->second;
  }

  // Frequencies outside the 64-bit range cannot be present: exact 0.
  std::complex<double> at(const mpz_class& freq) const {
    if (!freq.fits_slong_p()) return {0.0, 0.0};
    return at(static_cast<std::int64_t>(freq.get_si()));
  }

  double c0() const { return at(std::int64_t{0}).real(); }

  std::int64_t max_frequency() const {
    std::int64_t m = 0;
    for (const auto& [f, a] : coeffs) m = std::max({m, f, -f});
    return m;
  }
};

// |P_n|^2 has coefficients (pairwise-difference counts)/p_n; chat(0) = 1.
inline SparseSpectrum factor_square_coeffs(const RieszFactor& factor) {
  std::unordered_map<std::int64_t, double> acc;
  acc.reserve(factor.exponents.size() * factor.exponents.size());
  const double w = 1.0 / static_cast<double>(factor.p);
  for (std::int64_t a : factor.exponents)
    for (std::int64_t b : factor.exponents) acc[a - b] += w;
  SparseSpectrum out;
  out.coeffs.reserve(acc.size());
  for (const auto& [f, v] : acc) out.coeffs.emplace_back(f, std::complex<double>(v, 0.0));
  std::sort(out.coeffs.begin(), out.coeffs.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

namespace detail {

inline SparseSpectrum convolve_budgeted(const SparseSpectrum& a, const SparseSpectrum& b,
                                        std::uint64_t budget) {
  // Guard the frequency range before multiplying out.
  mpz_class reach = 0;
  for (const auto& [f, v] : a.coeffs) reach = std::max(reach, mpz_class(std::abs(f)));
  mpz_class reach_b = 0;
  for (const auto& [f, v] : b.coeffs) reach_b = std::max(reach_b, mpz_class(std::abs(f)));
  reach += reach_b;
  if (!reach.fits_slong_p())
    throw ResourceError("sparse product: frequencies exceed the 64-bit range");

  std::unordered_map<std::int64_t, std::complex<double>> acc;
  acc.reserve(std::min<std::size_t>(a.coeffs.size() * b.coeffs.size(), std::size_t{1} << 21));
  for (const auto& [fa, va] : a.coeffs) {
    for (const auto& [fb, vb] : b.coeffs) {
      acc[fa + fb] += va * vb;
      if (acc.size() > budget)
        throw ResourceError(
            "sparse product exceeds the coefficient budget (" + std::to_string(budget) +
            " entries); use grid-based evaluation instead or raise MOBIUS_COEFF_BUDGET");
    }
  }
  SparseSpectrum out;
  out.coeffs.reserve(acc.size());
  for (const auto& [f, v] : acc)
    if (std::abs(v.real()) >= kAmplitudePrune || std::abs(v.imag()) >= kAmplitudePrune)
      out.coeffs.emplace_back(f, v);
  std::sort(out.coeffs.begin(), out.coeffs.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

}  // namespace detail

// Convolution of the factor coefficient maps.  Empty product = the constant
// density 1: chat(0) = 1 only.
inline SparseSpectrum product_coeffs(const std::vector<RieszFactor>& factors,
                                     std::uint64_t budget = default_budget()) {
  SparseSpectrum prod;
  prod.coeffs.emplace_back(0, std::complex<double>(1.0, 0.0));
  for (const RieszFactor& f : factors)
    prod = detail::convolve_budgeted(prod, factor_square_coeffs(f), budget);
  return prod;
}

// ---------------------------------------------------------------------------
// Grid densities.
// ---------------------------------------------------------------------------
struct GridDensity {
  std::uint64_t grid = 0;
  std::vector<double> samples;  // clamped to >= 0

  double mean() const {
    double s = 0.0;
    for (double v : samples) s += v;
    return s / static_cast<double>(samples.size());
  }
};

// Direct per-point evaluation of the factor product.
inline GridDensity evaluate_density(const std::vector<RieszFactor>& factors,
                                    std::uint64_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("evaluate_density: grid_size must be >= 2");
  GridDensity out;
  out.grid = grid_size;
  out.samples.assign(grid_size, 1.0);
  for (std::uint64_t k = 0; k < grid_size; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(grid_size);
    double prod = 1.0;
    for (const RieszFactor& f : factors) {
      std::complex<double> s(0.0, 0.0);
      for (std::int64_t e : f.exponents) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(e) * t;
        s += std::complex<double>(std::cos(ang), std::sin(ang));
      }
      prod *= std::norm(s) / static_cast<double>(f.p);
    }
    out.samples[k] = prod;
  }
  return out;
}

// Evaluation through a coefficient map: d(t) = sum_f chat(f) e^{2 pi i f t}.
inline GridDensity evaluate_density(const SparseSpectrum& spectrum, std::uint64_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("evaluate_density: grid_size must be >= 2");
  std::vector<std::complex<double>> bins(grid_size, 0.0);
  for (const auto& [f, v] : spectrum.coeffs) {
    const std::int64_t r = ((f % static_cast<std::int64_t>(grid_size)) +
                            static_cast<std::int64_t>(grid_size)) %
                           static_cast<std::int64_t>(grid_size);
    bins[static_cast<std::size_t>(r)] += v;
  }
  std::vector<std::complex<double>> spec;
  if (fourier::is_power_of_two(grid_size)) {
    spec = std::move(bins);
    fourier::fft_inplace(spec, +1);
  } else {
    spec = fourier::dft(bins, +1);
  }
  GridDensity out;
  out.grid = grid_size;
  out.samples.resize(grid_size);
  for (std::uint64_t k = 0; k < grid_size; ++k) out.samples[k] = std::max(0.0, spec[k].real());
  return out;
}

// Empirical density |N^{-1/2} sum_{n<=N} f(T^n x) e^{-2 pi i (stride n) t}|^2.
// The stride carries the p of a pseudo-dilated empirical measure.
inline GridDensity empirical_spectral_density(const std::vector<std::complex<double>>& fvals,
                                              std::uint64_t N, std::uint64_t grid_size,
                                              std::uint64_t stride = 1) {
  if (N < 1) throw std::invalid_argument("empirical_spectral_density: N must be >= 1");
  if (grid_size < 2) throw std::invalid_argument("empirical_spectral_density: grid_size >= 2");
  if (fvals.size() < N + 1)
    throw std::invalid_argument("empirical_spectral_density: need f(T^n x) for n = 1..N");
  std::vector<std::complex<double>> bins(grid_size, 0.0);
  for (std::uint64_t n = 1; n <= N; ++n) bins[(stride * n) % grid_size] += fvals[n];
  std::vector<std::complex<double>> spec;
  if (fourier::is_power_of_two(grid_size)) {
    spec = std::move(bins);
    fourier::fft_inplace(spec, -1);
  } else {
    spec = fourier::dft(bins, -1);
  }
  GridDensity out;
  out.grid = grid_size;
  out.samples.resize(grid_size);
  for (std::uint64_t k = 0; k < grid_size; ++k)
    out.samples[k] = std::norm(spec[k]) / static_cast<double>(N);
  return out;
}

inline GridDensity empirical_spectral_density(const std::vector<double>& fvals, std::uint64_t N,
                                              std::uint64_t grid_size, std::uint64_t stride = 1) {
  std::vector<std::complex<double>> cv(fvals.size());
  for (std::size_t i = 0; i < fvals.size(); ++i) cv[i] = fvals[i];
  return empirical_spectral_density(cv, N, grid_size, stride);
}

// ---------------------------------------------------------------------------
// Pseudo-dilation and power push-forward on coefficient maps.
// sigma_(m): chat'(n) = chat(n/m) when m | n, else 0.
// sigma_p:   chat'(n) = chat(p n).
// ---------------------------------------------------------------------------
inline SparseSpectrum pseudo_dilate(const SparseSpectrum& s, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("pseudo_dilate: m must be >= 1");
  SparseSpectrum out;
  out.coeffs.reserve(s.coeffs.size());
  for (const auto& [f, v] : s.coeffs) {
    const __int128 nf = static_cast<__int128>(f) * static_cast<__int128>(m);
    if (nf > INT64_MAX || nf < INT64_MIN)
      throw ResourceError("pseudo_dilate: frequencies exceed the 64-bit range");
    out.coeffs.emplace_back(static_cast<std::int64_t>(nf), v);
  }
  return out;  // order preserved: multiplication by m is monotone
}

inline SparseSpectrum power_pushforward(const SparseSpectrum& s, std::uint64_t p) {
  if (p == 0) throw std::invalid_argument("power_pushforward: p must be >= 1");
  SparseSpectrum out;
  for (const auto& [f, v] : s.coeffs)
    if (f % static_cast<std::int64_t>(p) == 0)
      out.coeffs.emplace_back(f / static_cast<std::int64_t>(p), v);
  return out;
}

// ---------------------------------------------------------------------------
// Atomic measures with exact rational positions.
// ---------------------------------------------------------------------------
struct AtomicMeasure {
  struct Atom {
    Rational position;  // in [0,1)
    double mass = 0.0;
  };
  std::vector<Atom> atoms;  // sorted by position, positions unique

  static AtomicMeasure from_atoms(std::vector<Atom> raw) {
    for (Atom& a : raw) a.position = a.position.mod1();
    std::sort(raw.begin(), raw.end(),
              [](const Atom& x, const Atom& y) { return x.position < y.position; });
    AtomicMeasure out;
    for (const Atom& a : raw) {
      if (!out.atoms.empty() && out.atoms.back().position == a.position)
        out.atoms.back().mass += a.mass;
      else
        out.atoms.push_back(a);
    }
    return out;
  }

  static AtomicMeasure delta(const Rational& pos) { return from_atoms({{pos, 1.0}}); }

  static AtomicMeasure uniform(const std::vector<Rational>& positions) {
    std::vector<Atom> raw;
    const double m = 1.0 / static_cast<double>(positions.size());
    for (const Rational& p : positions) raw.push_back({p, m});
    return from_atoms(std::move(raw));
  }

  double total_mass() const {
    double s = 0.0;
    for (const Atom& a : atoms) s += a.mass;
    return s;
  }

  // chat(n) = sum_x mass(x) e^{-2 pi i n x}, with the angle reduced exactly.
  std::complex<double> coefficient(std::int64_t n) const {
    std::complex<double> acc(0.0, 0.0);
    for (const Atom& a : atoms) {
      const __int128 num = static_cast<__int128>(n) * a.position.num;
      const std::int64_t den = a.position.den;
      std::int64_t r = static_cast<std::int64_t>(num % den);
      if (r < 0) r += den;
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
      acc += a.mass * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
  }
};

inline AtomicMeasure pseudo_dilate(const AtomicMeasure& s, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("pseudo_dilate: m must be >= 1");
  std::vector<AtomicMeasure::Atom> raw;
  raw.reserve(s.atoms.size() * m);
  const Rational inv_m(1, static_cast<std::int64_t>(m));
  for (const AtomicMeasure::Atom& a : s.atoms)
    for (std::uint64_t j = 0; j < m; ++j)
      raw.push_back({(a.position + Rational(static_cast<std::int64_t>(j))) * inv_m,
                     a.mass / static_cast<double>(m)});
  return AtomicMeasure::from_atoms(std::move(raw));
}

inline AtomicMeasure power_pushforward(const AtomicMeasure& s, std::uint64_t p) {
  if (p == 0) throw std::invalid_argument("power_pushforward: p must be >= 1");
  std::vector<AtomicMeasure::Atom> raw;
  raw.reserve(s.atoms.size());
  const Rational pr(static_cast<std::int64_t>(p));
  for (const AtomicMeasure::Atom& a : s.atoms) raw.push_back({pr * a.position, a.mass});
  return AtomicMeasure::from_atoms(std::move(raw));
}

// ---------------------------------------------------------------------------
// Hellinger affinity.
// ---------------------------------------------------------------------------
inline double hellinger(const GridDensity& a, const GridDensity& b) {
  if (a.grid != b.grid) throw std::invalid_argument("hellinger: grid sizes differ");
  double s = 0.0;
  for (std::uint64_t k = 0; k < a.grid; ++k) s += std::sqrt(a.samples[k] * b.samples[k]);
  return s / static_cast<double>(a.grid);
}

inline double hellinger_atomic(const AtomicMeasure& a, const AtomicMeasure& b) {
  for (const auto& m : {a, b}) {
    for (const AtomicMeasure::Atom& at : m.atoms)
      if (at.mass < 0.0) throw std::invalid_argument("hellinger_atomic: negative mass");
    if (std::abs(m.total_mass() - 1.0) > 1e-9)
      throw std::invalid_argument("hellinger_atomic: inputs must be probability measures");
  }
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.atoms.size() && j < b.atoms.size()) {
    if (a.atoms[i].position == b.atoms[j].position) {
      s += std::sqrt(a.atoms[i].mass * b.atoms[j].mass);
      ++i;
      ++j;
    } else if (a.atoms[i].position < b.atoms[j].position) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Thouvenot equivalence for atomic measures: with (p,q)=1, a_p is singular to
// b_q exactly when the q-dilation of a is singular to the p-dilation of b --
// both reduce to "no x in supp a, y in supp b with p x = q y (mod 1)".
// ---------------------------------------------------------------------------
struct ThouvenotResult {
  bool singular_pq = false;
  bool singular_dilations = false;
  bool agree = false;
};

namespace detail {

inline bool supports_disjoint(const AtomicMeasure& a, const AtomicMeasure& b) {
  std::size_t i = 0, j = 0;
  while (i < a.atoms.size() && j < b.atoms.size()) {
    if (a.atoms[i].position == b.atoms[j].position) return false;
    if (a.atoms[i].position < b.atoms[j].position)
      ++i;
    else
      ++j;
  }
  return true;
}

}  // namespace detail

inline ThouvenotResult thouvenot_check(const AtomicMeasure& a, const AtomicMeasure& b,
                                       std::uint64_t p, std::uint64_t q) {
  if (p == 0 || q == 0) throw std::invalid_argument("thouvenot_check: p, q must be >= 1");
  if (std::gcd(p, q) != 1)
    throw std::invalid_argument("thouvenot_check: p and q must be coprime");
  ThouvenotResult out;
  out.singular_pq = detail::supports_disjoint(power_pushforward(a, p), power_pushforward(b, q));
  out.singular_dilations = detail::supports_disjoint(pseudo_dilate(a, q), pseudo_dilate(b, p));
  out.agree = (out.singular_pq == out.singular_dilations);
  return out;
}

// ---------------------------------------------------------------------------
// Subsequence plans n_0 < n_1 < ... with gaps >= 3, and the Klemes-Reinhold
// frequencies m_j = h_{n_j + 1} - h_{n_j} - s(n_j, p_{n_j} - 1): the top
// exponent of the stage-n_j factor.
// ---------------------------------------------------------------------------
struct SubsequencePlan {
  std::vector<long> indices;
  int eta = -1;  // residue class when the plan is arithmetic, else -1

  static SubsequencePlan arithmetic(int eta, long count, long stride = 3) {
    if (eta < 0 || count < 1 || stride < 3)
      throw InvalidPlanError("plan: need eta >= 0, count >= 1, stride >= 3");
    SubsequencePlan plan;
    plan.eta = eta;
    plan.indices.reserve(count);
    for (long j = 0; j < count; ++j) plan.indices.push_back(eta + stride * j);
    return plan;
  }

  void validate() const {
    if (indices.empty()) throw InvalidPlanError("plan: no stages");
    if (indices.front() < 0) throw InvalidPlanError("plan: stages must be >= 0");
    for (std::size_t j = 1; j < indices.size(); ++j)
      if (indices[j] < indices[j - 1] + 3)
        throw InvalidPlanError("plan: gap condition n_{j+1} >= n_j + 3 violated at j=" +
                               std::to_string(j));
  }
};

inline std::vector<mpz_class> mj_sequence(const rankone::RankOneParams& params,
                                          const SubsequencePlan& plan) {
  plan.validate();
  const long top = plan.indices.back() + 1;
  std::vector<mpz_class> m;
  m.reserve(plan.indices.size());
  mpz_class h = 1;
  std::size_t next = 0;
  for (long n = 0; n <= top; ++n) {
    const std::uint64_t p = params.cutting_at(n, h);
    const std::vector<rankone::Int> s = params.spacers_at(n, p, h);
    mpz_class total_s = 0;
    for (const rankone::Int& si : s) total_s += si;
    const mpz_class h_next = mpz_class(static_cast<unsigned long>(p)) * h + total_s;
    if (next < plan.indices.size() && plan.indices[next] == n) {
      m.push_back(h_next - h - s[p - 1]);
      ++next;
    }
    h = h_next;
  }
  return m;
}

// Product over the plan's stages, truncated either explicitly or at the
// deepest depth the coefficient budget allows (truncation <= 0).
struct PlanProduct {
  long truncation = 0;  // number of plan stages multiplied in
  SparseSpectrum spectrum;
};

inline PlanProduct plan_product(const rankone::RankOneParams& params, const SubsequencePlan& plan,
                                long truncation = 0, std::uint64_t budget = default_budget()) {
  plan.validate();
  const bool automatic = truncation <= 0;
  const std::size_t want =
      automatic ? plan.indices.size() : std::min<std::size_t>(truncation, plan.indices.size());
  PlanProduct out;
  out.spectrum.coeffs.emplace_back(0, std::complex<double>(1.0, 0.0));
  for (std::size_t k = 0; k < want; ++k) {
    try {
      const SparseSpectrum factor = factor_square_coeffs(riesz_factor(params, plan.indices[k]));
      out.spectrum = detail::convolve_budgeted(out.spectrum, factor, budget);
    } catch (const ResourceError&) {
      if (automatic && out.truncation > 0) return out;
      throw;
    }
    out.truncation = static_cast<long>(k + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Klemes-Reinhold stabilization: truncated plan products inspected at the m_j
// frequencies; one record per (j, K).
// ---------------------------------------------------------------------------
struct KlemesReport {
  long truncation = 0;  // number of plan stages actually multiplied
  std::vector<long> plan_indices;
  std::vector<mpz_class> m;
  std::vector<std::uint64_t> p;                 // p_{n_j} per plan element
  std::vector<std::vector<double>> alpha_by_k;  // [K][j]: alpha_hat_K(m_j)
  struct Row {
    long j = 0;
    double alpha = 0.0;      // alpha_hat_K(m_j)
    double inv_p = 0.0;      // 1/p_{n_j}
    double pair_sum = 0.0;   // alpha_hat_K(m_j + m_k), k the next plan element
    double pair_prod = 0.0;  // alpha_hat_K(m_j) * alpha_hat_K(m_k)
  };
  std::vector<Row> rows;

  std::vector<double> increments(std::size_t j) const {
    std::vector<double> inc;
    for (std::size_t k = 1; k < alpha_by_k.size(); ++k)
      inc.push_back(std::abs(alpha_by_k[k][j] - alpha_by_k[k - 1][j]));
    return inc;
  }
};

inline KlemesReport klemes_reinhold_check(const rankone::RankOneParams& params,
                                          const SubsequencePlan& plan, long truncation = 0,
                                          std::uint64_t budget = default_budget()) {
  plan.validate();
  KlemesReport report;
  report.plan_indices = plan.indices;
  report.m = mj_sequence(params, plan);
  const std::size_t J = plan.indices.size();
  const bool automatic = truncation <= 0;
  const std::size_t want = automatic ? J : std::min<std::size_t>(truncation, J);

  mpz_class h = 1;
  std::size_t next = 0;
  for (long n = 0; next < J && n <= plan.indices.back(); ++n) {
    const std::uint64_t p = params.cutting_at(n, h);
    const std::vector<rankone::Int> s = params.spacers_at(n, p, h);
    mpz_class total_s = 0;
    for (const rankone::Int& si : s) total_s += si;
    if (plan.indices[next] == n) {
      report.p.push_back(p);
      ++next;
    }
    h = mpz_class(static_cast<unsigned long>(p)) * h + total_s;
  }

  SparseSpectrum prod;
  prod.coeffs.emplace_back(0, std::complex<double>(1.0, 0.0));
  for (std::size_t k = 0; k < want; ++k) {
    SparseSpectrum factor;
    try {
      factor = factor_square_coeffs(riesz_factor(params, plan.indices[k]));
      prod = detail::convolve_budgeted(prod, factor, budget);
    } catch (const ResourceError&) {
      if (automatic) break;  // deepest feasible truncation reached
      throw;
    }
    std::vector<double> snapshot;
    snapshot.reserve(J);
    for (std::size_t j = 0; j < J; ++j) snapshot.push_back(prod.at(report.m[j]).real());
    report.alpha_by_k.push_back(std::move(snapshot));
    report.truncation = static_cast<long>(k + 1);
  }
  if (report.truncation == 0)
    throw ResourceError("klemes_reinhold_check: no truncation fits the coefficient budget");

  const std::vector<double>& alpha = report.alpha_by_k.back();
  for (std::size_t j = 0; j < J; ++j) {
    KlemesReport::Row row;
    row.j = static_cast<long>(j);
    row.alpha = alpha[j];
    row.inv_p = 1.0 / static_cast<double>(report.p[j]);
    const std::size_t k = (j + 1) % J;
    mpz_class pair = report.m[j] + report.m[k];
    row.pair_sum = prod.at(pair).real();
    row.pair_prod = alpha[j] * alpha[k];
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Peyriere / Brown-Hewitt series through coefficient lookups with test
// functions phi_n(z) = z^{f_n}: integral of phi_n d(mu) = muhat(-f_n).
// br1: partial sup-sums over the gap k; br2: partial sums over n of the
// squared mean differences.  Absent frequencies are exact zeros.
// ---------------------------------------------------------------------------
struct PeyriereReport {
  std::vector<double> br1_a;  // partial sums, k = 0..J-1
  std::vector<double> br1_b;
  std::vector<double> br2;  // partial sums, n = 1..J
};

inline PeyriereReport peyriere_diagnostics(const SparseSpectrum& spec_a,
                                           const SparseSpectrum& spec_b,
                                           const std::vector<mpz_class>& frequencies,
                                           std::size_t truncation) {
  if (truncation < 1 || truncation > frequencies.size())
    throw std::invalid_argument("peyriere_diagnostics: truncation must be in 1..#frequencies");
  const std::size_t J = truncation;
  PeyriereReport out;

  std::vector<std::complex<double>> ia(J), ib(J);
  for (std::size_t n = 0; n < J; ++n) {
    const mpz_class neg = -frequencies[n];
    ia[n] = spec_a.at(neg);
    ib[n] = spec_b.at(neg);
  }
  double acc = 0.0;
  for (std::size_t n = 0; n < J; ++n) {
    acc += std::norm(ia[n] - ib[n]);
    out.br2.push_back(acc);
  }
  for (const auto* side : {&spec_a, &spec_b}) {
    const std::vector<std::complex<double>>& single = (side == &spec_a) ? ia : ib;
    std::vector<double>& dst = (side == &spec_a) ? out.br1_a : out.br1_b;
    double sum = 0.0;
    for (std::size_t k = 0; k < J; ++k) {
      double sup = 0.0;
      for (std::size_t n = 0; n + k < J; ++n) {
        const mpz_class pair = -(frequencies[n] + frequencies[n + k]);
        const std::complex<double> joint = side->at(pair);
        sup = std::max(sup, std::abs(joint - single[n] * single[n + k]));
      }
      sum += sup;
      dst.push_back(sum);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Divergence diagnostic for sum 1/p_n^2 split by residue class.
// ---------------------------------------------------------------------------
struct DivergenceReport {
  int modulus = 3;
  int best_eta = 0;
  std::vector<double> sums;  // indexed by residue class
};

inline DivergenceReport divergence_residue(const rankone::RankOneParams& params, int modulus,
                                           long horizon) {
  if (modulus < 1) throw std::invalid_argument("divergence_residue: modulus must be >= 1");
  if (horizon < modulus)
    throw std::invalid_argument("divergence_residue: horizon must be >= modulus");
  DivergenceReport out;
  out.modulus = modulus;
  out.sums.assign(modulus, 0.0);
  mpz_class h = 1;
  for (long n = 0; n <= horizon; ++n) {
    const std::uint64_t p = params.cutting_at(n, h);
    const std::vector<rankone::Int> s = params.spacers_at(n, p, h);
    mpz_class total_s = 0;
    for (const rankone::Int& si : s) total_s += si;
    out.sums[n % modulus] += 1.0 / (static_cast<double>(p) * static_cast<double>(p));
    h = mpz_class(static_cast<unsigned long>(p)) * h + total_s;
  }
  out.best_eta = static_cast<int>(
      std::max_element(out.sums.begin(), out.sums.end()) - out.sums.begin());
  return out;
}

// ---------------------------------------------------------------------------
// The Bourgain-style inequality: |(1/Ntilde) sum f(T^{pn}x) f(T^{qn}x)| is
// bounded by (N/Ntilde) H(sigma_{f,(p),N}, sigma_{f,(q),N}).  With G beyond
// twice the top frequency the quadrature is exact and the bound is a theorem.
// ---------------------------------------------------------------------------
struct DkbszBound {
  double lhs = 0.0;
  double rhs = 0.0;
  double hellinger = 0.0;
  std::uint64_t n_tilde = 0;
  bool holds = false;
};

namespace detail {

inline void require_prime(std::uint64_t v, const char* who) {
  if (v < 2) throw std::invalid_argument(std::string(who) + ": primes must be >= 2");
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) throw std::invalid_argument(std::string(who) + ": " + std::to_string(v) +
                                                " is not prime");
}

}  // namespace detail

inline DkbszBound dkbsz_bound(const std::vector<double>& fvals, std::uint64_t p, std::uint64_t q,
                              std::uint64_t N, std::uint64_t grid_size) {
  detail::require_prime(p, "dkbsz_bound");
  detail::require_prime(q, "dkbsz_bound");
  if (p == q) throw std::invalid_argument("dkbsz_bound: primes must be distinct");
  const std::uint64_t mx = std::max(p, q);
  if (N < mx) throw std::invalid_argument("dkbsz_bound: need N >= max(p,q)");
  if (fvals.size() < N + 1)
    throw std::invalid_argument("dkbsz_bound: need f(T^n x) for n = 1..N");
  if (grid_size <= 2 * mx * N)
    throw std::invalid_argument("dkbsz_bound: grid too small (need G > 2 max(p,q) N)");

  DkbszBound out;
  out.n_tilde = N / mx;
  double acc = 0.0;
  for (std::uint64_t n = 1; n <= out.n_tilde; ++n) acc += fvals[p * n] * fvals[q * n];
  out.lhs = std::abs(acc / static_cast<double>(out.n_tilde));

  const GridDensity dp = empirical_spectral_density(fvals, N, grid_size, p);
  const GridDensity dq = empirical_spectral_density(fvals, N, grid_size, q);
  out.hellinger = hellinger(dp, dq);
  out.rhs = (static_cast<double>(N) / static_cast<double>(out.n_tilde)) * out.hellinger;
  out.holds = out.lhs <= out.rhs + 1e-6;
  return out;
}

}  // namespace mobius::spectral
