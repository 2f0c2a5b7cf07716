#pragma once

// Exact big-integer / big-rational helpers shared by every module.
// All rate and bound computations in this project are exact; nothing in the
// library touches floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace spread {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

BigInt big_pow(const BigInt& base, std::uint64_t exp);

// C(n, k); zero when k < 0 or k > n
BigInt binomial(const BigInt& n, const BigInt& k);

BigInt floor_rat(const Rat& x);
BigInt ceil_rat(const Rat& x);

// 2^e as an exact rational; e may be negative
Rat pow2_rat(std::int64_t e);

// floor(base^expo * 2^shift) with base >= 1, expo = p/q >= 0
BigInt floor_pow_shift(const BigInt& base, const Rat& expo, std::int64_t shift = 0);
// ceil of the same quantity
BigInt ceil_pow_shift(const BigInt& base, const Rat& expo, std::int64_t shift = 0);

// smallest integer s >= 0 with 2^s >= base^expo (base >= 1, expo >= 0)
std::int64_t ceil_log2_pow(const BigInt& base, const Rat& expo);

// floor(a^(1/q)) for a >= 0, q >= 1
BigInt iroot_floor(const BigInt& a, std::uint64_t q);

// least rational p/q with q <= max_den that upper-bounds sqrt(n);
// exact value for perfect squares
Rat sqrt_upper(const BigInt& n, const BigInt& max_den);

// strict "p" or "p/q" with optional leading minus; throws spread::Error
Rat parse_rat(const std::string& s);
std::string rat_str(const Rat& r);

// round to `significant` digits, trailing zeros after the point trimmed
std::string decimal_str(const Rat& r, int significant = 12);

} // namespace spread
