#include "spread/errors.hpp"
#include "spread/hypergraph.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

using namespace spread;

namespace {

// the running example: V={0,1,2,3}, k=2, edges 01 02 12 23
Hypergraph example4() {
  return make_hypergraph(4, 2, EdgeKind::distinct_set,
                         {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
}

Hypergraph random_graph(std::mt19937_64& rng, std::int64_t max_v, int max_k) {
  std::int64_t n = 2 + static_cast<std::int64_t>(rng() % (max_v - 1));
  int k = 1 + static_cast<int>(rng() % max_k);
  if (k > n) k = static_cast<int>(n);
  bool tuples = rng() & 1;
  std::int64_t m = static_cast<std::int64_t>(rng() % 40);
  std::vector<Edge> edges;
  for (std::int64_t i = 0; i < m; ++i) {
    Edge e;
    if (tuples) {
      for (int j = 0; j < k; ++j) e.push_back(static_cast<std::uint32_t>(rng() % n));
    } else {
      while (static_cast<int>(e.size()) < k) {
        std::uint32_t v = static_cast<std::uint32_t>(rng() % n);
        if (std::find(e.begin(), e.end(), v) == e.end()) e.push_back(v);
      }
    }
    edges.push_back(e);
  }
  return make_hypergraph(n, k, tuples ? EdgeKind::ordered_tuple : EdgeKind::distinct_set,
                         std::move(edges));
}

VertexSet random_subset(std::mt19937_64& rng, std::int64_t n) {
  VertexSet u;
  for (std::int64_t v = 0; v < n; ++v)
    if (rng() & 1) u.push_back(static_cast<std::uint32_t>(v));
  return u;
}

std::int64_t naive_count(const Hypergraph& g, const VertexSet& u) {
  std::int64_t c = 0;
  for (const Edge& e : g.edges) {
    bool inside = true;
    for (auto v : e)
      if (!std::binary_search(u.begin(), u.end(), v)) inside = false;
    if (inside) ++c;
  }
  return c;
}

} // namespace

TEST_CASE("validation catches malformed graphs") {
  CHECK_THROWS_AS(make_hypergraph(4, 2, EdgeKind::distinct_set, {{0, 4}}), Error);
  CHECK_THROWS_AS(make_hypergraph(4, 2, EdgeKind::distinct_set, {{1, 1}}), Error);
  CHECK_THROWS_AS(make_hypergraph(4, 2, EdgeKind::distinct_set, {{0, 1, 2}}), Error);
  CHECK_THROWS_AS(make_hypergraph(-1, 2, EdgeKind::distinct_set, {}), Error);
  CHECK_THROWS_AS(make_hypergraph(4, 0, EdgeKind::distinct_set, {}), Error);
  // tuples may repeat ids
  CHECK_NOTHROW(make_hypergraph(4, 2, EdgeKind::ordered_tuple, {{1, 1}}));
  // make_hypergraph sorts set edges
  Hypergraph g = make_hypergraph(4, 2, EdgeKind::distinct_set, {{2, 0}});
  CHECK(g.edges[0] == Edge{0, 2});

  try {
    make_hypergraph(4, 2, EdgeKind::distinct_set, {{0, 9}});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::malformed_input);
  }
}

TEST_CASE("validate_vertex_set") {
  Hypergraph g = example4();
  CHECK_NOTHROW(validate_vertex_set(g, {}));
  CHECK_NOTHROW(validate_vertex_set(g, {0, 3}));
  CHECK_THROWS_AS(validate_vertex_set(g, {3, 0}), Error);  // unsorted
  CHECK_THROWS_AS(validate_vertex_set(g, {1, 1}), Error);  // duplicate
  CHECK_THROWS_AS(validate_vertex_set(g, {0, 4}), Error);  // out of range
}

TEST_CASE("edge_count_within pinned examples") {
  Hypergraph g = example4();
  CHECK(edge_count_within(g, {}) == 0);
  CHECK(edge_count_within(g, {0, 1, 2, 3}) == 4);
  CHECK(edge_count_within(g, {0, 1, 2}) == 3); // 23 excluded

  // tuple edges need every coordinate inside U
  Hypergraph t = make_hypergraph(3, 2, EdgeKind::ordered_tuple, {{0, 0}, {0, 1}, {2, 1}});
  CHECK(edge_count_within(t, {0}) == 1);
  CHECK(edge_count_within(t, {0, 1}) == 2);
  CHECK(edge_count_within(t, {1, 2}) == 1);

  // multiplicity counts
  Hypergraph m = make_hypergraph(3, 2, EdgeKind::distinct_set, {{0, 1}, {0, 1}, {0, 1}});
  CHECK(edge_count_within(m, {0, 1}) == 3);
}

TEST_CASE("edge_count_within equals naive recount on random graphs") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 300; ++t) {
    Hypergraph g = random_graph(rng, 32, 4);
    VertexSet u = random_subset(rng, g.n_vertices);
    CHECK(edge_count_within(g, u) == naive_count(g, u));
  }
}

TEST_CASE("edge_count monotone along chains and additive over components") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    Hypergraph g = random_graph(rng, 24, 3);
    VertexSet u = random_subset(rng, g.n_vertices);
    VertexSet w = u;
    for (std::int64_t v = 0; v < g.n_vertices; ++v) {
      auto vv = static_cast<std::uint32_t>(v);
      if (!std::binary_search(w.begin(), w.end(), vv) && (rng() & 1)) {
        w.insert(std::lower_bound(w.begin(), w.end(), vv), vv);
      }
    }
    CHECK(edge_count_within(g, u) <= edge_count_within(g, w));
  }

  // two disjoint triangles: no edge crosses, so e(A) + e(B) = |E|
  Hypergraph two = make_hypergraph(
      6, 2, EdgeKind::distinct_set,
      {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
  CHECK(edge_count_within(two, {0, 1, 2}) + edge_count_within(two, {3, 4, 5}) == 6);
}

TEST_CASE("densities") {
  Hypergraph g = example4();
  CHECK(pseudo_density(g) == Rat(4, 16));
  CHECK(binomial_density(g) == Rat(4, 6));

  Hypergraph empty = make_hypergraph(4, 2, EdgeKind::distinct_set, {});
  CHECK(pseudo_density(empty) == Rat(0));

  Hypergraph pair = make_hypergraph(2, 2, EdgeKind::distinct_set, {{0, 1}});
  CHECK(pseudo_density(pair) == Rat(1, 4));
  CHECK(binomial_density(pair) == Rat(1));

  // pseudo_density * |V|^k = |E| exactly
  std::mt19937_64 rng(12);
  for (int t = 0; t < 50; ++t) {
    Hypergraph r = random_graph(rng, 20, 3);
    Rat p = pseudo_density(r);
    CHECK(p * Rat(big_pow(r.n_vertices, static_cast<std::uint64_t>(r.k))) ==
          Rat(static_cast<std::int64_t>(r.edges.size())));
  }
}

TEST_CASE("max_dense_subset_bruteforce pinned examples") {
  Hypergraph g = example4();
  DenseSubsetResult r0 = max_dense_subset_bruteforce(g, 0);
  CHECK(r0.U.empty());
  CHECK(r0.e == 0);

  DenseSubsetResult r2 = max_dense_subset_bruteforce(g, 2);
  CHECK(r2.e == 1);
  CHECK(r2.U == VertexSet{0, 1}); // lexicographic winner among the e=1 pairs

  DenseSubsetResult r3 = max_dense_subset_bruteforce(g, 3);
  CHECK(r3.e == 3);
  CHECK(r3.U == VertexSet{0, 1, 2});
  CHECK(r3.subsets_checked == 1 + 4 + 6 + 4); // all subsets of size <= 3
}

TEST_CASE("max_dense_subset_bruteforce budget") {
  Hypergraph g = make_hypergraph(30, 2, EdgeKind::distinct_set, {{0, 1}});
  try {
    max_dense_subset_bruteforce(g, 15, BigInt(1000));
    CHECK(false);
  } catch (const BudgetExceeded& e) {
    CHECK(e.kind() == ErrKind::budget_exceeded);
    BigInt count = 0;
    for (int u = 0; u <= 15; ++u) count += binomial(30, u);
    CHECK(e.candidate_count == count);
    CHECK(e.budget == 1000);
  }
}

TEST_CASE("bruteforce worker count never changes the answer") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    Hypergraph g = random_graph(rng, 14, 3);
    std::int64_t cap = static_cast<std::int64_t>(rng() % 5);
    DenseSubsetResult a = max_dense_subset_bruteforce(g, cap, BigInt(10000000), 1);
    DenseSubsetResult b = max_dense_subset_bruteforce(g, cap, BigInt(10000000), 4);
    CHECK(a.U == b.U);
    CHECK(a.e == b.e);
    CHECK(a.subsets_checked == b.subsets_checked);
  }
}

TEST_CASE("induced_expectation pinned examples") {
  Hypergraph g = example4();
  CHECK(induced_expectation(g, 2) == Rat(2, 3));
  CHECK(induced_expectation(g, 4) == Rat(4));
  CHECK(induced_expectation(g, 1) == Rat(0)); // u < k

  Hypergraph empty = make_hypergraph(6, 3, EdgeKind::distinct_set, {});
  CHECK(induced_expectation(empty, 4) == Rat(0));
}

TEST_CASE("induced_expectation equals the exhaustive mean") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 15; ++t) {
    Hypergraph g = random_graph(rng, 12, 3);
    if (g.kind == EdgeKind::ordered_tuple) continue;
    std::int64_t n = g.n_vertices;
    std::int64_t u = g.k + static_cast<std::int64_t>(rng() % (n - g.k + 1));
    // mean over all size-u subsets, accumulated exactly
    BigInt total = 0, count = 0;
    VertexSet sel;
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(u));
    for (std::int64_t v = 0; v < u; ++v) idx[static_cast<std::size_t>(v)] = static_cast<std::uint32_t>(v);
    while (true) {
      VertexSet s(idx.begin(), idx.end());
      total += edge_count_within(g, s);
      count += 1;
      // next combination
      std::int64_t i = u - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == static_cast<std::uint32_t>(n - u + i)) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (std::int64_t j = i + 1; j < u; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    CHECK(induced_expectation(g, u) == Rat(total, count));
  }
}

TEST_CASE("serialization round-trips") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 100; ++t) {
    Hypergraph g = random_graph(rng, 16, 3);
    Hypergraph h = deserialize(serialize(g));
    CHECK(h.n_vertices == g.n_vertices);
    CHECK(h.k == g.k);
    CHECK(h.kind == g.kind);
    // canonical form on write: compare as multisets
    std::vector<Edge> a = canonical_edges(g);
    std::vector<Edge> b = canonical_edges(h);
    CHECK(a == b);
    // a second round-trip is byte-identical
    CHECK(serialize(h) == serialize(deserialize(serialize(h))));
  }

  Hypergraph empty = make_hypergraph(5, 2, EdgeKind::distinct_set, {});
  CHECK(deserialize(serialize(empty)).edges.empty());

  Hypergraph rep = make_hypergraph(3, 3, EdgeKind::ordered_tuple, {{1, 1, 2}});
  Hypergraph rep2 = deserialize(serialize(rep));
  CHECK(rep2.edges == rep.edges);

  CHECK_THROWS_AS(deserialize("not json"), Error);
  CHECK_THROWS_AS(deserialize("{}"), Error);
  CHECK_THROWS_AS(deserialize(R"({"version":2,"n_vertices":2,"k":2,"edge_kind":"distinct_set","edges":[]})"),
                  Error);
  CHECK_THROWS_AS(deserialize(R"({"version":1,"n_vertices":2,"k":2,"edge_kind":"bogus","edges":[]})"),
                  Error);
}

TEST_CASE("trim and induced subgraph") {
  Hypergraph g = example4();
  Hypergraph t = trim_to_edge_count(g, 2);
  CHECK(t.edges.size() == 2);
  CHECK(canonical_edges(t) == std::vector<Edge>{{0, 1}, {0, 2}}); // largest dropped
  CHECK_THROWS_AS(trim_to_edge_count(g, 5), Error);

  std::vector<std::uint32_t> back;
  Hypergraph sub = induced_subgraph(g, {0, 2, 3}, &back);
  CHECK(sub.n_vertices == 3);
  CHECK(back == std::vector<std::uint32_t>{0, 2, 3});
  // edges inside {0,2,3}: 02 and 23, relabeled through the back map
  CHECK(canonical_edges(sub) == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK(edge_count_within(g, {0, 2, 3}) ==
        static_cast<std::int64_t>(sub.edges.size()));
}
