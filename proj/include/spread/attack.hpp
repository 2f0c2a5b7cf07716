#pragma once

// Dense-subset attack machinery: greedy derandomized densification (exact
// conditional expectations), the k = 2 base-case pipeline, rank-lowering
// projection, and the recursive attack for k > 2. Probabilistic choices are
// seeded bounded retries; the best candidate seen is kept and `achieved` is
// always recomputed from an edge recount in the original multigraph.

#include "spread/hypergraph.hpp"
#include "spread/numeric.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace spread {

struct AttackConfig {
  std::uint64_t seed = 0;
  int max_bipartition_trials = 64;
  int max_B_trials = 256;
  int max_A_trials = 64;
};

struct TraceEntry {
  std::string stage;
  nlohmann::json info;
};

struct AttackResult {
  VertexSet U;
  std::int64_t e_U = 0;
  BigInt target;
  bool achieved = false;
  std::vector<TraceEntry> trace;
};

// State after the base case's reduction stages: the heavy pairs P and their
// vertex union U_max, then the leftover edges collapsed to a simple graph and
// split by the best seeded bipartition. Every retained edge crosses
// left/right; at most one edge per pair.
struct BipartiteReduction {
  std::vector<std::uint32_t> left, right;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> simple; // crossing only
  std::vector<std::pair<std::uint32_t, std::uint32_t>> removed_pairs;
  VertexSet u_max;
  std::int64_t collapse_factor = 1;
};

// least c with (1 - k/c)^k >= 0.99; c_2 = 399
std::int64_t densify_c_k(int k);

// Greedy conditional-expectation subset of size u. Every step keeps the exact
// conditional expectation nondecreasing, so e(U) >= E[e(U)] >= 0.99 p u^k
// whenever u >= densify_c_k(k). Smaller u requires best_effort (no guarantee).
VertexSet densify(const Hypergraph& g, std::int64_t u, bool best_effort = false);

// Each edge meeting A loses its smallest A-vertex and becomes a (k-1)-edge
// over the same vertex set. Tuple edges left with fewer than k-1 distinct
// vertices are dropped; *dropped receives the count.
Hypergraph project_to_lower_rank(const Hypergraph& g, const VertexSet& A,
                                 std::int64_t* dropped = nullptr);

// k = 2 pipeline: heavy pairs, reduction to a simple bipartite graph, then the
// degree (Case 1) and sampling (Case 2) selectors.
AttackResult base_case_pipeline(const Hypergraph& g, const Rat& beta,
                                std::int64_t D, const AttackConfig& cfg);

// k = 2 delegates to the base case; k > 2 samples A, projects, recurses at
// D + k + 1, lifts, and densifies A union B to half size.
AttackResult find_dense_subset(const Hypergraph& g, const Rat& beta,
                               std::int64_t D, const AttackConfig& cfg);

nlohmann::json attack_result_json(const AttackResult& r);

} // namespace spread
