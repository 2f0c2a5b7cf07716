#pragma once

// Probabilistic construction of spread hypergraphs and their certificates.
// Edge probabilities are exact dyadics 2^-t so sampling is exact: one 64-bit
// draw decides each candidate edge, in a fixed enumeration order, from a
// seeded splitmix64 stream.

#include "spread/errors.hpp"
#include "spread/hypergraph.hpp"
#include "spread/numeric.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace spread {

struct SpreadParams {
  // caller-chosen
  std::int64_t n = 1; // 2^n vertices
  int k = 2;
  Rat beta;
  std::int64_t D = 0;
  int d_slack = 2;
  std::uint64_t seed = 0;

  // derived by derive_spread_params; may be overridden before use
  Rat alpha;              // alpha_from_beta(beta, k)
  BigInt f_n;             // floor((k - (k-1)beta) * n)
  std::int64_t dyadic_t = 0; // edge probability is 2^-dyadic_t
  Rat edge_probability;   // min(1, 2^{D - ceil((k-1) beta n)})
  BigInt subset_cap;      // floor(2^{beta n})
  BigInt edge_bound;      // ceil(2^{alpha f_n}) * 2^{d_slack}
  BigInt target_edges;    // default ceil(expected_edges / 2)
  Rat expected_edges;     // C(2^n, k) * edge_probability
};

SpreadParams derive_spread_params(std::int64_t n, int k, const Rat& beta,
                                  std::int64_t D, std::uint64_t seed,
                                  int d_slack = 2);

// One G(C(2^n,k), p) draw with p = min(1, 2^{D - ceil((k-1) beta n)}).
// Deterministic given params.seed. distinct_set edges, each subset at most once.
Hypergraph sample_spread(const SpreadParams& params);

// Ordered-tuple sampler: k = 2^{h_n}, tuple space (2^n)^k, inclusion
// probability min(1, 2^{f_n - n k + 3}); requires n*k <= 24.
Hypergraph sample_tuple_spread(std::int64_t n, std::int64_t f_n, std::int64_t h_n,
                               std::uint64_t seed);

enum class VerifyMode { exhaustive, randomized, attack_assisted };

const char* verify_mode_name(VerifyMode m);

struct VerifyConfig {
  VerifyMode mode = VerifyMode::exhaustive;
  BigInt budget = BigInt(10000000);     // exhaustive candidate budget
  std::int64_t trials_per_stratum = 100000; // randomized mode
  std::uint64_t seed = 0;               // randomized / attack draws
  int workers = 1;                      // exhaustive scan only; never changes results
  std::optional<Rat> attack_beta;       // attack_assisted; defaults from cap
  std::int64_t attack_D = 0;
};

struct SpreadCertificate {
  nlohmann::json params; // echo of the parameters the certificate refers to
  std::string mode;
  VertexSet max_U;
  std::int64_t max_e = 0;
  BigInt subsets_checked;
  std::int64_t attempts = 0; // construct attempts; 0 for bare verification
  bool pass = false;
};

// pass = true certifies e(U) < edge_bound for every |U| <= subset_cap seen by
// the mode (all of them in exhaustive mode). pass = false is always sound: the
// reported max_U is a recheckable witness.
SpreadCertificate verify_spread(const Hypergraph& g, const BigInt& subset_cap,
                                const BigInt& edge_bound, const VerifyConfig& cfg);

std::string serialize_certificate(const SpreadCertificate& c);
SpreadCertificate deserialize_certificate(const std::string& text);

struct ConstructResult {
  Hypergraph graph;
  SpreadCertificate cert;
  std::uint64_t seed_used = 0;
  std::int64_t attempts = 0;
};

class AttemptsExhausted : public Error {
 public:
  AttemptsExhausted(ConstructResult best_, const std::string& msg)
      : Error(ErrKind::attempts_exhausted, msg), best(std::move(best_)) {}

  ConstructResult best;
};

// Resamples with seeds params.seed, params.seed+1, ... until a graph has at
// least target_edges edges and a passing certificate. Throws AttemptsExhausted
// (carrying the best candidate) after max_attempts failures.
ConstructResult construct_certified(const SpreadParams& params,
                                    std::int64_t max_attempts,
                                    const VerifyConfig& cfg);

enum class Tail { upper, lower };

// Exact-rational upper approximations of the Chernoff budgets:
//   upper: P(X >= (1+delta) mu) <= 2^{-delta mu}, requires delta >= 6
//   lower: P(X <= (1-delta) mu) <= e^{-delta^2 mu / 2}, requires 0 <= delta <= 1
Rat chernoff_budget(const Rat& mu, const Rat& delta, Tail tail);

} // namespace spread
