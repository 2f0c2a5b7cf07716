#include "spread/rates.hpp"

#include "spread/errors.hpp"

namespace spread {

namespace {

void check_rate(const Rat& x, const char* name) {
  if (x < 0 || x > 1)
    throw Error(ErrKind::precondition, std::string(name) + " must lie in [0, 1]");
}

void check_k(const BigInt& k) {
  if (k < 1) throw Error(ErrKind::precondition, "k must be >= 1");
}

} // namespace

Rat threshold_beta(const Rat& alpha, const BigInt& k) {
  check_rate(alpha, "alpha");
  check_k(k);
  return Rat(k) * alpha / (Rat(1) + Rat(k - 1) * alpha);
}

Rat alpha_from_beta(const Rat& beta, const BigInt& k) {
  check_rate(beta, "beta");
  check_k(k);
  // beta / (k - (k-1)*beta); denominator >= 1 on the admissible range
  return beta / (Rat(k) - Rat(k - 1) * beta);
}

bool classify_ext(const RateParams& p) {
  check_rate(p.alpha, "alpha");
  check_rate(p.beta, "beta");
  check_k(p.k);
  if (p.k == 1) return p.beta <= p.alpha; // same for both variants
  Rat thr = threshold_beta(p.alpha, p.k);
  if (p.variant == Variant::total) {
    if (p.alpha == 0 && p.beta == 0) return true;
    if (p.alpha == 1 && p.beta == 1) return true;
    return p.beta < thr;
  }
  if (p.beta < thr) return true;
  return p.beta == thr && p.computable;
}

FWindow f_window(const RateParams& p, std::int64_t n, const Rat& slack) {
  check_rate(p.alpha, "alpha");
  check_rate(p.beta, "beta");
  check_k(p.k);
  if (n < 1) throw Error(ErrKind::precondition, "f_window: n must be >= 1");
  if (p.alpha == 0)
    throw Error(ErrKind::precondition, "f_window: alpha = 0 makes the lower slope undefined");
  FWindow w;
  w.lower = p.beta / p.alpha * Rat(n) - slack;
  if (p.variant == Variant::total) {
    if (p.alpha == 1)
      throw Error(ErrKind::precondition, "f_window: alpha = 1 makes the total upper slope undefined");
    w.upper = (Rat(1) - p.beta) / (Rat(1) - p.alpha) * Rat(p.k) * Rat(n) + slack;
  } else {
    Rat slope = Rat(p.k) / (Rat(1) + Rat(p.k - 1) * p.alpha);
    w.upper = slope * Rat(n) + sqrt_upper(BigInt(n), BigInt(1000000)) + slack;
  }
  return w;
}

Rat advice_bound(const Rat& alpha, std::int64_t h) {
  if (h < 0) throw Error(ErrKind::precondition, "advice_bound: h must be >= 0");
  return threshold_beta(alpha, big_pow(2, static_cast<std::uint64_t>(h)));
}

Rat psi(std::int64_t n, std::int64_t f_n, std::int64_t h_n) {
  if (h_n < 0) throw Error(ErrKind::precondition, "psi: h_n must be >= 0");
  return Rat(n) - Rat(BigInt(f_n - n)) / Rat(big_pow(2, static_cast<std::uint64_t>(h_n)));
}

std::string emit_threshold_curves(const std::vector<BigInt>& ks, int grid_points) {
  if (grid_points < 2)
    throw Error(ErrKind::precondition, "emit_threshold_curves: need at least 2 grid points");
  std::string out = "k,alpha,beta\n";
  for (const BigInt& k : ks) {
    check_k(k);
    for (int j = 0; j < grid_points; ++j) {
      Rat alpha(BigInt(j), BigInt(grid_points - 1));
      Rat beta = threshold_beta(alpha, k);
      out += k.str();
      out += ',';
      out += decimal_str(alpha);
      out += ',';
      out += decimal_str(beta);
      out += '\n';
    }
  }
  return out;
}

} // namespace spread
