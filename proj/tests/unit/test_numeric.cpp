#include "spread/errors.hpp"
#include "spread/numeric.hpp"

#include <doctest.h>

#include <cstdint>
#include <random>

using namespace spread;

TEST_CASE("big_pow and binomial") {
  CHECK(big_pow(2, 10) == 1024);
  CHECK(big_pow(3, 0) == 1);
  CHECK(big_pow(7, 5) == 16807);
  CHECK(big_pow(10, 20) == BigInt("100000000000000000000"));

  CHECK(binomial(16, 2) == 120);
  CHECK(binomial(16, 4) == 1820);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(52, 5) == 2598960);
  // Pascal identity on a strip
  for (int n = 1; n <= 30; ++n)
    for (int k = 1; k <= n; ++k)
      CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
}

TEST_CASE("floor_rat / ceil_rat / pow2_rat") {
  CHECK(floor_rat(Rat(7, 2)) == 3);
  CHECK(ceil_rat(Rat(7, 2)) == 4);
  CHECK(floor_rat(Rat(-7, 2)) == -4);
  CHECK(ceil_rat(Rat(-7, 2)) == -3);
  CHECK(floor_rat(Rat(6)) == 6);
  CHECK(ceil_rat(Rat(6)) == 6);

  CHECK(pow2_rat(3) == 8);
  CHECK(pow2_rat(0) == 1);
  CHECK(pow2_rat(-2) == Rat(1, 4));
}

TEST_CASE("floor_pow_shift / ceil_pow_shift exact and inexact") {
  // exact powers: floor == ceil
  CHECK(floor_pow_shift(16, Rat(1, 2)) == 4);
  CHECK(ceil_pow_shift(16, Rat(1, 2)) == 4);
  CHECK(floor_pow_shift(16, Rat(3, 4)) == 8);
  CHECK(ceil_pow_shift(16, Rat(3, 4)) == 8);
  CHECK(floor_pow_shift(1, Rat(99, 7)) == 1);

  // inexact: ceil = floor + 1
  CHECK(floor_pow_shift(5, Rat(1, 2)) == 2);
  CHECK(ceil_pow_shift(5, Rat(1, 2)) == 3);
  CHECK(floor_pow_shift(2, Rat(3, 2)) == 2);
  CHECK(ceil_pow_shift(2, Rat(3, 2)) == 3);

  // shifts
  CHECK(floor_pow_shift(16, Rat(1, 2), -1) == 2);
  CHECK(floor_pow_shift(16, Rat(1, 2), 3) == 32);
  CHECK(floor_pow_shift(7, Rat(1), -3) == 0);
  CHECK(ceil_pow_shift(7, Rat(1), -3) == 1);

  // big exact case
  CHECK(floor_pow_shift(BigInt(1) << 40, Rat(1, 2)) == BigInt(1) << 20);

  // property: floor <= ceil <= floor + 1 and q-th powers bracket base^p * 2^(s q)
  std::mt19937_64 rng(12345);
  for (int t = 0; t < 200; ++t) {
    BigInt base = 1 + static_cast<std::int64_t>(rng() % 1000);
    std::int64_t p = static_cast<std::int64_t>(rng() % 5);
    std::int64_t q = 1 + static_cast<std::int64_t>(rng() % 5);
    std::int64_t s = static_cast<std::int64_t>(rng() % 7) - 3;
    Rat expo(p, q);
    BigInt f = floor_pow_shift(base, expo, s);
    BigInt c = ceil_pow_shift(base, expo, s);
    CHECK(f <= c);
    CHECK(c <= f + 1);
    // (f)^q <= base^p * 2^{s q} <= (c)^q, cleared of negative shifts
    BigInt lhs = big_pow(f, static_cast<std::uint64_t>(q));
    BigInt rhs = big_pow(c, static_cast<std::uint64_t>(q));
    BigInt mid = big_pow(base, static_cast<std::uint64_t>(p));
    std::int64_t sq = s * q;
    if (sq >= 0)
      mid <<= sq;
    else {
      lhs <<= -sq;
      rhs <<= -sq;
    }
    CHECK(lhs <= mid);
    CHECK(rhs >= mid);
  }
}

TEST_CASE("ceil_log2_pow") {
  CHECK(ceil_log2_pow(16, Rat(1, 2)) == 2);
  CHECK(ceil_log2_pow(5, Rat(1, 2)) == 2);
  CHECK(ceil_log2_pow(1, Rat(7, 3)) == 0);
  CHECK(ceil_log2_pow(8, Rat(2, 3)) == 2);
  CHECK(ceil_log2_pow(9, Rat(2, 3)) == 3); // 9^(2/3) = 4.326...
  CHECK(ceil_log2_pow(1024, Rat(1)) == 10);
}

TEST_CASE("iroot_floor") {
  CHECK(iroot_floor(27, 3) == 3);
  CHECK(iroot_floor(26, 3) == 2);
  CHECK(iroot_floor(28, 3) == 3);
  CHECK(iroot_floor(0, 5) == 0);
  CHECK(iroot_floor(1, 1) == 1);
  CHECK(iroot_floor(BigInt("1000000000000000000"), 2) == BigInt(1000000000));
  std::mt19937_64 rng(999);
  for (int t = 0; t < 100; ++t) {
    BigInt a = static_cast<std::int64_t>(rng() % 1000000);
    std::uint64_t q = 1 + rng() % 6;
    BigInt r = iroot_floor(a, q);
    CHECK(big_pow(r, q) <= a);
    CHECK(big_pow(r + 1, q) > a);
  }
}

TEST_CASE("sqrt_upper") {
  CHECK(sqrt_upper(49, 10) == Rat(7));
  CHECK(sqrt_upper(0, 10) == Rat(0));
  CHECK(sqrt_upper(2, 5) == Rat(3, 2));
  CHECK(sqrt_upper(2, 100) == Rat(99, 70));
  // upper bound that cannot be lowered with the same denominator
  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    BigInt n = 2 + static_cast<std::int64_t>(rng() % 5000);
    BigInt cap = 1 + static_cast<std::int64_t>(rng() % 200);
    Rat r = sqrt_upper(n, cap);
    CHECK(r * r >= n);
    CHECK(boost::multiprecision::denominator(r) <= cap);
    if (r * r > n) {
      Rat lower(boost::multiprecision::numerator(r) - 1,
                boost::multiprecision::denominator(r));
      CHECK(lower * lower < n);
    }
  }
}

TEST_CASE("parse_rat accepts strict p/q only") {
  CHECK(parse_rat("3/7") == Rat(3, 7));
  CHECK(parse_rat("-3/7") == Rat(-3, 7));
  CHECK(parse_rat("+2/4") == Rat(1, 2));
  CHECK(parse_rat("5") == Rat(5));
  CHECK(parse_rat("0") == Rat(0));

  CHECK_THROWS_AS(parse_rat(""), Error);
  CHECK_THROWS_AS(parse_rat("0.5"), Error);
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("3/-7"), Error);
  CHECK_THROWS_AS(parse_rat("3x/7"), Error);
  CHECK_THROWS_AS(parse_rat("/7"), Error);
  CHECK_THROWS_AS(parse_rat("3/"), Error);
  try {
    parse_rat("0.5");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::malformed_input);
  }
}

TEST_CASE("rat_str round-trips and normalizes") {
  CHECK(rat_str(Rat(4, 8)) == "1/2");
  CHECK(rat_str(Rat(-1, 2)) == "-1/2");
  CHECK(rat_str(Rat(5)) == "5");
  CHECK(rat_str(Rat(0)) == "0");
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 100; ++t) {
    Rat r(static_cast<std::int64_t>(rng() % 2000) - 1000,
          1 + static_cast<std::int64_t>(rng() % 999));
    CHECK(parse_rat(rat_str(r)) == r);
  }
}

TEST_CASE("decimal_str") {
  CHECK(decimal_str(Rat(0)) == "0");
  CHECK(decimal_str(Rat(1, 2)) == "0.5");
  CHECK(decimal_str(Rat(2)) == "2");
  CHECK(decimal_str(Rat(1, 3), 5) == "0.33333");
  CHECK(decimal_str(Rat(2, 3), 4) == "0.6667");
  CHECK(decimal_str(Rat(-1, 4), 3) == "-0.25");
  CHECK(decimal_str(Rat(999, 100), 2) == "10");
  CHECK(decimal_str(Rat(12345), 3) == "12300");
  CHECK_THROWS_AS(decimal_str(Rat(1), 0), Error);
}
