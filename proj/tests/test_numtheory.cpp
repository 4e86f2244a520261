#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

#include "mobius/numtheory.hpp"

namespace nt = mobius::numtheory;

namespace {
const nt::ArithmeticTable& table_100k() {
  static const nt::ArithmeticTable t = nt::sieve(100000);
  return t;
}
}  // namespace

TEST_CASE("mu and lambda small values") {
  const auto& t = table_100k();
  CHECK(t.mu(1) == 1);
  CHECK(t.mu(2) == -1);
  CHECK(t.mu(3) == -1);
  CHECK(t.mu(4) == 0);
  CHECK(t.mu(6) == 1);
  CHECK(t.mu(12) == 0);
  CHECK(t.mu(30) == -1);
  CHECK(t.mu(210) == 1);
  CHECK(t.lambda(1) == 1);
  CHECK(t.lambda(2) == -1);
  CHECK(t.lambda(4) == 1);
  CHECK(t.lambda(8) == -1);
  CHECK(t.lambda(12) == -1);  // 2^2 * 3: three prime factors with multiplicity
  CHECK(t.lambda(36) == 1);
}

TEST_CASE("mertens checkpoints") {
  const auto& t = table_100k();
  CHECK(t.M(1) == 1);
  CHECK(t.M(2) == 0);
  CHECK(t.M(100) == 1);
  CHECK(t.M(1000) == 2);
  CHECK(t.M(10000) == -23);
  CHECK(t.M(100000) == -48);
}

TEST_CASE("mertens increments match mu") {
  const auto& t = table_100k();
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::uint64_t> dist(2, t.limit);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t n = dist(rng);
    CHECK(t.M(n) - t.M(n - 1) == t.mu(n));
  }
}

TEST_CASE("linear sieve agrees with trial division") {
  const auto& t = table_100k();
  for (std::uint64_t n = 1; n <= 2000; ++n) CHECK(t.mu(n) == nt::mu_trial_division(n));
}

TEST_CASE("segmented sieve agrees with the linear sieve") {
  const auto& t = table_100k();
  const std::vector<std::int8_t> seg = nt::mobius_segmented(50000, 4096);
  for (std::uint64_t n = 1; n <= 50000; ++n) CHECK(seg[n] == t.mu(n));
}

TEST_CASE("multiplicativity spot checks") {
  const auto& t = table_100k();
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::uint64_t> dist(1, 300);
  for (int i = 0; i < 400; ++i) {
    const std::uint64_t a = dist(rng), b = dist(rng);
    if (std::gcd(a, b) == 1) CHECK(t.mu(a * b) == t.mu(a) * t.mu(b));
    CHECK(t.lambda(a * b) == t.lambda(a) * t.lambda(b));  // completely multiplicative
  }
  for (std::uint64_t p : {2, 3, 5, 7, 11})
    for (std::uint64_t k = 1; k * p * p <= 1000; ++k) CHECK(t.mu(p * p * k) == 0);
}

TEST_CASE("squarefree density checkpoints") {
  CHECK(nt::squarefree_density(nt::sieve(1000)) == Catch::Approx(0.608).epsilon(1e-12));
  CHECK(nt::squarefree_density(table_100k()) == Catch::Approx(0.60794).epsilon(1e-12));
  // Matches an on-the-spot trial-division count.
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= 5000; ++n) count += (nt::mu_trial_division(n) != 0);
  CHECK(nt::squarefree_density(5000) ==
        Catch::Approx(static_cast<double>(count) / 5000.0).margin(0));
}

TEST_CASE("sieve input validation") {
  CHECK_THROWS_AS(nt::sieve(0), std::invalid_argument);
}

TEST_CASE("binary cache round trip") {
  const nt::ArithmeticTable t = nt::sieve(5000);
  const std::string path =
      (std::filesystem::temp_directory_path() / "mobius_cache_test.bin").string();
  nt::write_cache(t, path);
  const nt::ArithmeticTable back = nt::read_cache(path);
  CHECK(back.limit == t.limit);
  CHECK(back.mobius == t.mobius);
  CHECK(back.liouville == t.liouville);
  CHECK(back.mertens == t.mertens);
  std::remove(path.c_str());
  CHECK_THROWS(nt::read_cache(path));
}

TEST_CASE("twisted sum: two-term exact case") {
  // S_2(t) = e(-t) - e(-2t); on the grid {k/8} the modulus peaks at t = 1/2
  // where S = (-1) - (1) = -2.
  const nt::ArithmeticTable t = nt::sieve(2);
  const nt::TwistedScan scan = nt::twisted_sum_scan(t, 8, {2});
  REQUIRE(scan.points.size() == 1);
  CHECK(scan.points[0].n == 2);
  CHECK(scan.points[0].sup == Catch::Approx(2.0).margin(1e-12));
  CHECK(scan.points[0].argmax_t == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("twisted sum decade scan") {
  const nt::TwistedScan scan = nt::twisted_sum_scan(table_100k(), 4096, {1000, 10000, 100000});
  REQUIRE(scan.points.size() == 3);
  CHECK(scan.points[0].sup == Catch::Approx(91.509685).margin(1e-4));
  CHECK(scan.points[1].sup == Catch::Approx(284.046811).margin(1e-4));
  CHECK(scan.points[2].sup == Catch::Approx(636.869043).margin(1e-4));
  // Sup grows like a power N^c with c visibly below 1/2 at these scales.
  CHECK(scan.loglog_slope > 0.2);
  CHECK(scan.loglog_slope < 0.5);
}
