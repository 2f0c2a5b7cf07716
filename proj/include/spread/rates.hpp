#pragma once

// Exact rate-of-randomness bounds: the extraction threshold
// beta(alpha, k) = k*alpha / (1 + (k-1)*alpha), its inverse, the membership
// classifier for the total and partial extractor families, the f-window, the
// advice-length bound, and psi. Everything is exact rational arithmetic.

#include "spread/numeric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spread {

enum class Variant { total, partial };

struct RateParams {
  Rat alpha;
  Rat beta;
  BigInt k = 1;
  Variant variant = Variant::total;
  bool computable = true; // models "alpha and beta are computable reals"
};

// k*alpha / (1 + (k-1)*alpha); requires 0 <= alpha <= 1, k >= 1
Rat threshold_beta(const Rat& alpha, const BigInt& k);

// inverse on beta: alpha with threshold_beta(alpha, k) == beta;
// requires 0 <= beta <= 1, k >= 1
Rat alpha_from_beta(const Rat& beta, const BigInt& k);

// true = the (alpha, beta, k) family contains an extractor
bool classify_ext(const RateParams& p);

struct FWindow {
  Rat lower;
  Rat upper;
};

// Admissible f(n) window at a given n.
//   lower (both variants):  (beta/alpha)*n - slack           requires alpha > 0
//   upper, total:           ((1-beta)/(1-alpha))*k*n + slack  requires alpha < 1
//   upper, partial:         (k/(1+(k-1)alpha))*n + sqrt(n) + slack
// sqrt(n) enters as the least rational p/q with q <= 10^6 upper-bounding it.
FWindow f_window(const RateParams& p, std::int64_t n, const Rat& slack);

// threshold_beta(alpha, 2^h): the rate bound with h advice bits
Rat advice_bound(const Rat& alpha, std::int64_t h);

// psi(n, f_n, h_n) = n - (f_n - n) / 2^{h_n}
Rat psi(std::int64_t n, std::int64_t f_n, std::int64_t h_n);

// CSV "k,alpha,beta" over a uniform alpha grid in [0, 1]; grid_points >= 2;
// decimals rendered to 12 significant digits
std::string emit_threshold_curves(const std::vector<BigInt>& ks, int grid_points);

} // namespace spread
