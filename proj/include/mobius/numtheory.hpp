#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "mobius/fourier.hpp"

namespace mobius::numtheory {

struct ArithmeticTable {
  std::uint64_t limit = 0;
  std::vector<std::int8_t> mobius;     // 1-indexed, mobius[0] unused
  std::vector<std::int8_t> liouville;  // 1-indexed
  std::vector<std::int64_t> mertens;   // mertens[n] = sum_{k<=n} mobius[k]

  int mu(std::uint64_t n) const { return mobius[n]; }
  int lambda(std::uint64_t n) const { return liouville[n]; }
  std::int64_t M(std::uint64_t n) const { return mertens[n]; }
};

// Linear smallest-prime-factor sieve: every composite is struck exactly once.
inline ArithmeticTable sieve(std::uint64_t limit) {
  if (limit == 0) throw std::invalid_argument("sieve: limit must be >= 1");
  ArithmeticTable t;
  t.limit = limit;
  t.mobius.assign(limit + 1, 0);
  t.liouville.assign(limit + 1, 0);
  t.mertens.assign(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  primes.reserve(static_cast<std::size_t>(limit > 16 ? limit / std::log(double(limit)) * 1.2 : 8));
  t.mobius[1] = 1;
  t.liouville[1] = 1;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    if (t.liouville[n] == 0) {  // untouched => prime
      primes.push_back(static_cast<std::uint32_t>(n));
      t.mobius[n] = -1;
      t.liouville[n] = -1;
    }
    for (std::uint32_t p : primes) {
      const std::uint64_t m = n * p;
      if (m > limit) break;
      t.liouville[m] = static_cast<std::int8_t>(-t.liouville[n]);
      if (n % p == 0) {
        t.mobius[m] = 0;
        break;  // keep p = spf(m) unique
      }
      t.mobius[m] = static_cast<std::int8_t>(-t.mobius[n]);
    }
  }
  std::int64_t acc = 0;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    acc += t.mobius[n];
    t.mertens[n] = acc;
  }
  return t;
}

inline double squarefree_density(const ArithmeticTable& t) {
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= t.limit; ++n) count += (t.mobius[n] != 0);
  return static_cast<double>(count) / static_cast<double>(t.limit);
}

inline double squarefree_density(std::uint64_t limit) { return squarefree_density(sieve(limit)); }

struct TwistedPoint {
  std::uint64_t n = 0;
  double sup = 0.0;
  double argmax_t = 0.0;
};

struct TwistedScan {
  std::vector<TwistedPoint> points;
  double loglog_slope = 0.0;  // fitted d ln(sup) / d ln(N), an empirical decay exponent
};

// sup over t = k/G of |sum_{n<=N} mu(n) e^{2*pi*i*n*t}| at each checkpoint.
// e^{2*pi*i*n*k/G} depends on n mod G only, so bucket the mu values by residue
// and evaluate one DFT per checkpoint.
inline TwistedScan twisted_sum_scan(const ArithmeticTable& t, std::uint64_t grid_size,
                                    std::vector<std::uint64_t> checkpoints = {}) {
  if (grid_size < 2) throw std::invalid_argument("twisted_sum_scan: grid_size must be >= 2");
  if (checkpoints.empty()) {
    for (std::uint64_t n = 1000; n <= t.limit; n *= 10) checkpoints.push_back(n);
    if (checkpoints.empty()) checkpoints.push_back(t.limit);
  }
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw std::invalid_argument("twisted_sum_scan: checkpoints must be ascending");
  if (checkpoints.back() > t.limit)
    throw std::invalid_argument("twisted_sum_scan: checkpoint exceeds sieve limit");

  TwistedScan scan;
  std::vector<std::complex<double>> buckets(grid_size, 0.0);
  std::uint64_t n = 1;
  for (std::uint64_t cp : checkpoints) {
    for (; n <= cp; ++n) buckets[n % grid_size] += static_cast<double>(t.mobius[n]);
    std::vector<std::complex<double>> spec = buckets;
    if (fourier::is_power_of_two(grid_size)) {
      fourier::fft_inplace(spec, +1);
    } else {
      spec = fourier::dft(spec, +1);
    }
    TwistedPoint pt;
    pt.n = cp;
    for (std::uint64_t k = 0; k < grid_size; ++k) {
      const double a = std::abs(spec[k]);
      if (a > pt.sup) {
        pt.sup = a;
        pt.argmax_t = static_cast<double>(k) / static_cast<double>(grid_size);
      }
    }
    scan.points.push_back(pt);
  }
  if (scan.points.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : scan.points) {
      const double x = std::log(static_cast<double>(p.n));
      const double y = std::log(std::max(p.sup, 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(scan.points.size());
    scan.loglog_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return scan;
}

// Binary cache: little-endian {magic "MOBS", version u32, limit u64}, then
// `limit` signed bytes of mu (n = 1..limit).
inline constexpr std::uint32_t kCacheVersion = 1;

inline void write_cache(const ArithmeticTable& t, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open cache file for writing: " + path);
  std::fwrite("MOBS", 1, 4, f);
  const std::uint32_t ver = kCacheVersion;
  std::fwrite(&ver, sizeof ver, 1, f);
  const std::uint64_t lim = t.limit;
  std::fwrite(&lim, sizeof lim, 1, f);
  std::fwrite(t.mobius.data() + 1, 1, t.limit, f);
  std::fclose(f);
}

inline ArithmeticTable read_cache(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open cache file: " + path);
  char magic[4];
  std::uint32_t ver = 0;
  std::uint64_t lim = 0;
  bool ok = std::fread(magic, 1, 4, f) == 4 && std::memcmp(magic, "MOBS", 4) == 0 &&
            std::fread(&ver, sizeof ver, 1, f) == 1 && ver == kCacheVersion &&
            std::fread(&lim, sizeof lim, 1, f) == 1 && lim >= 1;
  if (!ok) {
    std::fclose(f);
    throw std::runtime_error("bad cache header: " + path);
  }
  ArithmeticTable t;
  t.limit = lim;
  t.mobius.assign(lim + 1, 0);
  if (std::fread(t.mobius.data() + 1, 1, lim, f) != lim) {
    std::fclose(f);
    throw std::runtime_error("truncated cache: " + path);
  }
  std::fclose(f);
  // liouville is not cached; rebuild cheaply from a fresh sieve when needed.
  ArithmeticTable fresh = sieve(lim);
  t.liouville = std::move(fresh.liouville);
  t.mertens.assign(lim + 1, 0);
  std::int64_t acc = 0;
  for (std::uint64_t n = 1; n <= lim; ++n) {
    acc += t.mobius[n];
    t.mertens[n] = acc;
  }
  return t;
}

// Trial-division reference for cross-checking the sieve (test oracle, O(sqrt n) per value).
inline int mu_trial_division(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mu(0) undefined");
  int k = 0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      ++k;
    }
  }
  if (n > 1) ++k;
  return (k % 2 == 0) ? 1 : -1;
}

// Segmented Eratosthenes-style mu over [1, limit]: second independent
// implementation (marks square divisibility per segment).
inline std::vector<std::int8_t> mobius_segmented(std::uint64_t limit,
                                                 std::uint64_t segment = 1 << 16) {
  std::vector<std::int8_t> mu(limit + 1, 1);
  mu[0] = 0;
  std::vector<std::uint32_t> primes;
  {
    const std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(double(limit))) + 1;
    std::vector<bool> comp(root + 1, false);
    for (std::uint64_t p = 2; p <= root; ++p) {
      if (comp[p]) continue;
      primes.push_back(static_cast<std::uint32_t>(p));
      for (std::uint64_t m = p * p; m <= root; m += p) comp[m] = true;
    }
  }
  std::vector<std::uint64_t> rest(segment);
  for (std::uint64_t lo = 1; lo <= limit; lo += segment) {
    const std::uint64_t hi = std::min(limit, lo + segment - 1);
    for (std::uint64_t n = lo; n <= hi; ++n) rest[n - lo] = n;
    for (std::uint32_t p : primes) {
      const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
      if (pp > hi) break;
      for (std::uint64_t m = ((lo + pp - 1) / pp) * pp; m <= hi; m += pp) mu[m] = 0;
      for (std::uint64_t m = ((lo + p - 1) / p) * p; m <= hi; m += p) {
        if (mu[m] == 0) {
          while (rest[m - lo] % p == 0) rest[m - lo] /= p;
          continue;
        }
        mu[m] = static_cast<std::int8_t>(-mu[m]);
        rest[m - lo] /= p;
      }
    }
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (mu[n] != 0 && rest[n - lo] > 1) mu[n] = static_cast<std::int8_t>(-mu[n]);
  }
  return mu;
}

}  // namespace mobius::numtheory
