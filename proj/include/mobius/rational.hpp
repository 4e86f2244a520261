#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mobius {

// Exact rational on 64-bit words with 128-bit intermediates.  Atom positions on
// the circle stay small (denominators are products of a few primes and stage
// heights), so overflow is a hard error rather than a silent wrap.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;  // always > 0, gcd(|num|, den) == 1

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational: 64-bit overflow");
    return static_cast<std::int64_t>(v);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
    const __int128 d = static_cast<__int128>(a.den) * b.den;
    const __int128 g = gcd128(n < 0 ? -n : n, d);
    return raw(checked(n / g), checked(d / g));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + Rational(-b.num, b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    const __int128 n = static_cast<__int128>(a.num) * b.num;
    const __int128 d = static_cast<__int128>(a.den) * b.den;
    const __int128 g = gcd128(n < 0 ? -n : n, d);
    return raw(checked(n / g), checked(d / g));
  }
  Rational operator-() const { return raw(-num, den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a == b || a < b; }

  // Representative in [0, 1): positions on the circle.
  Rational mod1() const {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    return raw(r, den);  // gcd(r, den) == gcd(num, den) == 1 unless r == 0
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

 private:
  static Rational raw(std::int64_t n, std::int64_t d) {
    Rational r;
    r.num = n;
    r.den = d;
    if (r.num == 0) r.den = 1;
    if (r.den < 0) {
      r.num = -r.num;
      r.den = -r.den;
    }
    const std::int64_t g = std::gcd(r.num < 0 ? -r.num : r.num, r.den);
    if (g > 1) {
      r.num /= g;
      r.den /= g;
    }
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
};

}  // namespace mobius

template <>
struct std::hash<mobius::Rational> {
  std::size_t operator()(const mobius::Rational& r) const noexcept {
    return std::hash<std::int64_t>()(r.num) * 1000003u ^ std::hash<std::int64_t>()(r.den);
  }
};
