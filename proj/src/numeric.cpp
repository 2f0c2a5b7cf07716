#include "spread/numeric.hpp"

#include "spread/errors.hpp"

#include <algorithm>
#include <cctype>

namespace spread {

namespace mp = boost::multiprecision;

BigInt big_pow(const BigInt& base, std::uint64_t exp) {
  BigInt r = 1;
  BigInt b = base;
  std::uint64_t e = exp;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

BigInt binomial(const BigInt& n, const BigInt& k) {
  if (k < 0 || k > n) return 0;
  BigInt kk = k;
  if (n - k < kk) kk = n - k;
  BigInt r = 1;
  for (BigInt i = 0; i < kk; ++i) {
    r = r * (n - i) / (i + 1); // exact: prefix products of C are integral
  }
  return r;
}

BigInt floor_rat(const Rat& x) {
  BigInt num = mp::numerator(x);
  BigInt den = mp::denominator(x); // > 0
  BigInt q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

BigInt ceil_rat(const Rat& x) { return -floor_rat(-x); }

Rat pow2_rat(std::int64_t e) {
  if (e >= 0) return Rat(big_pow(2, static_cast<std::uint64_t>(e)));
  return Rat(BigInt(1), big_pow(2, static_cast<std::uint64_t>(-e)));
}

namespace {

// Compare t against base^(p/q) * 2^shift without leaving the integers:
//   t <= base^(p/q) * 2^s  <=>  t^q * 2^(q*max(-s,0)) <= base^p * 2^(q*max(s,0))
struct PowCmp {
  BigInt lhs_scale; // multiplies t^q
  BigInt rhs;

  PowCmp(const BigInt& base, const Rat& expo, std::int64_t shift) {
    if (base < 1) throw Error(ErrKind::precondition, "pow bound: base must be >= 1");
    if (expo < 0) throw Error(ErrKind::precondition, "pow bound: exponent must be >= 0");
    BigInt p = mp::numerator(expo);
    BigInt q = mp::denominator(expo);
    // keep base^p at a sane bit length for desk-scale inputs
    if (base > 1 && p * static_cast<std::int64_t>(mp::msb(base) + 1) > 10000000)
      throw Error(ErrKind::scale_exceeded, "pow bound: base^p exceeds 10^7 bits");
    qq = static_cast<std::uint64_t>(q);
    rhs = big_pow(base, static_cast<std::uint64_t>(p));
    lhs_scale = 1;
    if (shift >= 0) {
      rhs <<= static_cast<std::uint64_t>(shift) * qq;
    } else {
      lhs_scale = BigInt(1) << static_cast<std::uint64_t>(-shift) * qq;
    }
  }

  bool le(const BigInt& t) const { return big_pow(t, qq) * lhs_scale <= rhs; }
  bool ge(const BigInt& t) const { return big_pow(t, qq) * lhs_scale >= rhs; }

  std::uint64_t qq;
};

} // namespace

BigInt floor_pow_shift(const BigInt& base, const Rat& expo, std::int64_t shift) {
  PowCmp cmp(base, expo, shift);
  // largest t with t <= x; search on [0, hi) where hi is provably above x
  BigInt lo = 0;
  BigInt hi = 2;
  while (cmp.le(hi)) hi <<= 1;
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (cmp.le(mid)) lo = mid; else hi = mid;
  }
  return lo;
}

BigInt ceil_pow_shift(const BigInt& base, const Rat& expo, std::int64_t shift) {
  BigInt f = floor_pow_shift(base, expo, shift);
  PowCmp cmp(base, expo, shift);
  if (cmp.ge(f)) return f; // x was an exact integer
  return f + 1;
}

std::int64_t ceil_log2_pow(const BigInt& base, const Rat& expo) {
  if (base < 1 || expo < 0)
    throw Error(ErrKind::precondition, "ceil_log2_pow: base >= 1 and exponent >= 0 required");
  BigInt p = mp::numerator(expo);
  BigInt q = mp::denominator(expo);
  BigInt rhs = big_pow(base, static_cast<std::uint64_t>(p));
  std::uint64_t qq = static_cast<std::uint64_t>(q);
  // smallest s >= 0 with 2^(s*q) >= base^p
  std::int64_t s = 0;
  BigInt lhs = 1;
  BigInt step = BigInt(1) << qq;
  while (lhs < rhs) {
    lhs *= step;
    ++s;
  }
  return s;
}

BigInt iroot_floor(const BigInt& a, std::uint64_t q) {
  if (a < 0 || q == 0) throw Error(ErrKind::precondition, "iroot_floor: a >= 0, q >= 1 required");
  if (a == 0) return 0;
  BigInt lo = 1;
  BigInt hi = 2;
  while (big_pow(hi, q) <= a) hi <<= 1;
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (big_pow(mid, q) <= a) lo = mid; else hi = mid;
  }
  return lo;
}

namespace {

// does p/q upper-bound sqrt(n)? (all nonnegative)
bool above_sqrt(const BigInt& p, const BigInt& q, const BigInt& n) {
  return p * p >= n * q * q;
}

} // namespace

Rat sqrt_upper(const BigInt& n, const BigInt& max_den) {
  if (n < 0) throw Error(ErrKind::precondition, "sqrt_upper: n must be >= 0");
  if (max_den < 1) throw Error(ErrKind::precondition, "sqrt_upper: max_den must be >= 1");
  BigInt r = iroot_floor(n, 2);
  if (r * r == n) return Rat(r);

  // Stern-Brocot walk between lo = r/1 and hi = (r+1)/1 with batched steps.
  // Every best upper approximation appears as `hi` along the walk, so the
  // last hi whose denominator fits the cap is the least admissible upper bound.
  BigInt a = r, b = 1;      // lo = a/b < sqrt(n)
  BigInt c = r + 1, d = 1;  // hi = c/d > sqrt(n)
  while (b + d <= max_den) {
    BigInt mp_num = a + c, mp_den = b + d;
    if (above_sqrt(mp_num, mp_den, n)) {
      // mediant is above: move hi toward sqrt; hi_k = (k*a + c)/(k*b + d)
      BigInt kden = (max_den - d) / b; // largest k keeping the denominator legal
      BigInt klo = 1, khi = kden;      // predicate true at k=1
      while (klo < khi) {
        BigInt mid = (klo + khi + 1) / 2;
        if (above_sqrt(mid * a + c, mid * b + d, n)) klo = mid; else khi = mid - 1;
      }
      c = klo * a + c;
      d = klo * b + d;
    } else {
      // mediant is below: move lo toward sqrt; lo_k = (a + k*c)/(b + k*d)
      BigInt kden = (max_den - b) / d;
      BigInt klo = 1, khi = kden;
      while (klo < khi) {
        BigInt mid = (klo + khi + 1) / 2;
        if (!above_sqrt(a + mid * c, b + mid * d, n)) klo = mid; else khi = mid - 1;
      }
      a = a + klo * c;
      b = b + klo * d;
    }
  }
  return Rat(c, d);
}

Rat parse_rat(const std::string& s) {
  auto bad = [&](const char* why) {
    return Error(ErrKind::malformed_input, "cannot parse rational '" + s + "': " + why);
  };
  if (s.empty()) throw bad("empty string");
  std::string num = s, den = "1";
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
  }
  auto check_int = [&](const std::string& t, bool sign_ok) {
    if (t.empty()) throw bad("missing digits");
    std::size_t i = 0;
    if (sign_ok && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) throw bad("missing digits");
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) throw bad("not an integer");
  };
  check_int(num, true);
  check_int(den, false);
  if (num[0] == '+') num.erase(0, 1); // cpp_int's parser rejects a leading '+'
  BigInt n(num), d(den);
  if (d == 0) throw bad("zero denominator");
  return Rat(n, d);
}

std::string rat_str(const Rat& r) {
  BigInt num = mp::numerator(r);
  BigInt den = mp::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string decimal_str(const Rat& r, int significant) {
  if (significant < 1) throw Error(ErrKind::precondition, "decimal_str: need >= 1 digit");
  if (r == 0) return "0";
  bool neg = r < 0;
  BigInt a = mp::numerator(r), b = mp::denominator(r);
  if (a < 0) a = -a;

  // e = floor(log10(a/b))
  std::int64_t e = 0;
  if (a >= b) {
    e = static_cast<std::int64_t>(BigInt(a / b).str().size()) - 1;
  } else {
    BigInt t = a;
    while (t < b) {
      t *= 10;
      --e;
    }
  }

  // first `significant` digits, rounded half away from zero
  std::int64_t scale = significant - 1 - e;
  BigInt num = a, den = b;
  if (scale >= 0) num *= big_pow(10, static_cast<std::uint64_t>(scale));
  else den *= big_pow(10, static_cast<std::uint64_t>(-scale));
  BigInt digits = num / den;
  if (2 * (num - digits * den) >= den) ++digits;
  std::string ds = digits.str();
  if (static_cast<int>(ds.size()) > significant) { // rounding carried (e.g. 9.99 -> 10.0)
    ds.pop_back();
    ++e;
  }

  std::string out;
  if (e >= significant - 1) {
    out = ds + std::string(static_cast<std::size_t>(e - significant + 1), '0');
  } else if (e >= 0) {
    std::string ip = ds.substr(0, static_cast<std::size_t>(e + 1));
    std::string fp = ds.substr(static_cast<std::size_t>(e + 1));
    while (!fp.empty() && fp.back() == '0') fp.pop_back();
    out = fp.empty() ? ip : ip + "." + fp;
  } else {
    std::string fp = std::string(static_cast<std::size_t>(-e - 1), '0') + ds;
    while (!fp.empty() && fp.back() == '0') fp.pop_back();
    out = "0." + fp;
  }
  return neg ? "-" + out : out;
}

const char* err_kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::malformed_input: return "malformed-input";
    case ErrKind::precondition: return "precondition-violation";
    case ErrKind::budget_exceeded: return "budget-exceeded";
    case ErrKind::scale_exceeded: return "scale-exceeded";
    case ErrKind::attempts_exhausted: return "attempts-exhausted";
    case ErrKind::length_mismatch: return "length-mismatch";
    case ErrKind::oracle_contract: return "oracle-contract";
    case ErrKind::nondistinct_outputs: return "nondistinct-outputs";
  }
  return "unknown";
}

} // namespace spread
