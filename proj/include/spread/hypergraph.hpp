#pragma once

// k-uniform hypergraphs with multiplicity. Two edge kinds:
//   distinct_set   edges are k distinct vertex ids, stored sorted ascending
//   ordered_tuple  edges are length-k tuples, repeats allowed
// e(U) always counts with multiplicity; a tuple edge lies inside U when every
// coordinate does.

#include "spread/numeric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace spread {

enum class EdgeKind { distinct_set, ordered_tuple };

using Edge = std::vector<std::uint32_t>;
using VertexSet = std::vector<std::uint32_t>; // sorted, distinct

struct Hypergraph {
  std::int64_t n_vertices = 0;
  int k = 1;
  EdgeKind kind = EdgeKind::distinct_set;
  std::vector<Edge> edges;
};

// Throws Error(malformed_input) when any invariant fails.
void validate(const Hypergraph& g);

// Sorts each distinct_set edge, then validates.
Hypergraph make_hypergraph(std::int64_t n_vertices, int k, EdgeKind kind,
                           std::vector<Edge> edges);

// U must be sorted, distinct, and within range (throws precondition otherwise).
void validate_vertex_set(const Hypergraph& g, const VertexSet& u);

std::int64_t edge_count_within(const Hypergraph& g, const VertexSet& u);

// |E| / |V|^k, the primary density notion
Rat pseudo_density(const Hypergraph& g);
// |E| / C(|V|, k), exposed for comparison; requires k <= |V|
Rat binomial_density(const Hypergraph& g);

struct DenseSubsetResult {
  VertexSet U;
  std::int64_t e = 0;
  BigInt subsets_checked;
};

// True when (e1, U1) beats (e2, U2): larger count first, then the
// lexicographically smaller vertex list. Total order, so parallel scans and
// sequential scans agree.
bool better_candidate(std::int64_t e1, const VertexSet& u1, std::int64_t e2,
                      const VertexSet& u2);

// Exact maximiser of e(U) over all subsets with |U| <= size_cap.
// Candidate count sum_{u<=cap} C(|V|, u) must fit the budget, otherwise a
// BudgetExceeded carrying the computed count is thrown. Deterministic for any
// worker count.
DenseSubsetResult max_dense_subset_bruteforce(const Hypergraph& g,
                                              std::int64_t size_cap,
                                              const BigInt& budget = BigInt(10000000),
                                              int workers = 1);

// E[e(U)] for U a uniform u-subset of the vertices; distinct_set only.
Rat induced_expectation(const Hypergraph& g, std::int64_t u);

// Canonical JSON (edges sorted lexicographically on write).
std::string serialize(const Hypergraph& g);
Hypergraph deserialize(const std::string& text);

// Copy of the edge list in canonical (lexicographic) order.
std::vector<Edge> canonical_edges(const Hypergraph& g);

// Drops the lexicographically largest edges until exactly m remain.
Hypergraph trim_to_edge_count(const Hypergraph& g, std::int64_t m);

// Relabels U to 0..|U|-1 and keeps the edges inside U. back_map (optional)
// receives the new-id -> old-id table.
Hypergraph induced_subgraph(const Hypergraph& g, const VertexSet& u,
                            std::vector<std::uint32_t>* back_map = nullptr);

} // namespace spread
