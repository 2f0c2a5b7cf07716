#include "spread/hypergraph.hpp"

#include "spread/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <future>
#include <thread>

namespace spread {

namespace {

using json = nlohmann::json;

// fixed-width bitset over vertex ids
struct Mask {
  std::vector<std::uint64_t> w;

  explicit Mask(std::int64_t bits) : w(static_cast<std::size_t>((bits + 63) / 64), 0) {}

  void set(std::uint32_t i) { w[i >> 6] |= 1ULL << (i & 63); }
  void clear(std::uint32_t i) { w[i >> 6] &= ~(1ULL << (i & 63)); }

  // is `sub` a subset of this mask?
  bool covers(const Mask& sub) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (sub.w[i] & ~w[i]) return false;
    return true;
  }
};

Mask mask_of(const VertexSet& u, std::int64_t n_vertices) {
  Mask m(n_vertices);
  for (auto v : u) m.set(v);
  return m;
}

} // namespace

void validate(const Hypergraph& g) {
  auto bad = [](const std::string& msg) { return Error(ErrKind::malformed_input, msg); };
  if (g.n_vertices < 0) throw bad("n_vertices must be >= 0");
  if (g.k < 1) throw bad("k must be >= 1");
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    std::string at = "edges[" + std::to_string(i) + "]";
    if (static_cast<int>(e.size()) != g.k) throw bad(at + ": expected " + std::to_string(g.k) + " vertices");
    for (auto v : e)
      if (static_cast<std::int64_t>(v) >= g.n_vertices) throw bad(at + ": vertex id out of range");
    if (g.kind == EdgeKind::distinct_set) {
      for (std::size_t j = 1; j < e.size(); ++j) {
        if (e[j] <= e[j - 1])
          throw bad(at + ": distinct_set edge must be strictly increasing");
      }
    }
  }
}

Hypergraph make_hypergraph(std::int64_t n_vertices, int k, EdgeKind kind,
                           std::vector<Edge> edges) {
  Hypergraph g{n_vertices, k, kind, std::move(edges)};
  if (kind == EdgeKind::distinct_set)
    for (auto& e : g.edges) std::sort(e.begin(), e.end());
  validate(g);
  return g;
}

void validate_vertex_set(const Hypergraph& g, const VertexSet& u) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (static_cast<std::int64_t>(u[i]) >= g.n_vertices)
      throw Error(ErrKind::precondition, "vertex set: id out of range");
    if (i > 0 && u[i] <= u[i - 1])
      throw Error(ErrKind::precondition, "vertex set: must be sorted and distinct");
  }
}

std::int64_t edge_count_within(const Hypergraph& g, const VertexSet& u) {
  validate_vertex_set(g, u);
  Mask um = mask_of(u, g.n_vertices);
  std::int64_t count = 0;
  for (const Edge& e : g.edges) {
    bool inside = true;
    for (auto v : e) {
      if (!(um.w[v >> 6] >> (v & 63) & 1)) {
        inside = false;
        break;
      }
    }
    if (inside) ++count;
  }
  return count;
}

Rat pseudo_density(const Hypergraph& g) {
  if (g.n_vertices == 0)
    throw Error(ErrKind::precondition, "pseudo_density: graph has no vertices");
  return Rat(BigInt(g.edges.size()),
             big_pow(BigInt(g.n_vertices), static_cast<std::uint64_t>(g.k)));
}

Rat binomial_density(const Hypergraph& g) {
  if (g.n_vertices < g.k)
    throw Error(ErrKind::precondition, "binomial_density: needs k <= |V|");
  return Rat(BigInt(g.edges.size()), binomial(g.n_vertices, g.k));
}

bool better_candidate(std::int64_t e1, const VertexSet& u1, std::int64_t e2,
                      const VertexSet& u2) {
  if (e1 != e2) return e1 > e2;
  return u1 < u2;
}

namespace {

struct ScanState {
  const std::vector<std::vector<const Mask*>>* by_max; // edge masks grouped by max vertex
  std::int64_t cap;
  std::uint32_t n;
  VertexSet cur;
  Mask cur_mask;
  std::int64_t cur_e = 0;
  std::int64_t best_e = -1;
  VertexSet best_u;

  ScanState(const std::vector<std::vector<const Mask*>>& bm, std::int64_t cap_,
            std::uint32_t n_)
      : by_max(&bm), cap(cap_), n(n_), cur_mask(n_) {}

  void consider() {
    if (best_e < 0 || better_candidate(cur_e, cur, best_e, best_u)) {
      best_e = cur_e;
      best_u = cur;
    }
  }

  // add v (larger than everything in cur), count edges newly enclosed
  void descend(std::uint32_t v) {
    cur.push_back(v);
    cur_mask.set(v);
    std::int64_t gained = 0;
    for (const Mask* em : (*by_max)[v])
      if (cur_mask.covers(*em)) ++gained;
    cur_e += gained;
    consider();
    if (static_cast<std::int64_t>(cur.size()) < cap)
      for (std::uint32_t w = v + 1; w < n; ++w) descend(w);
    cur_e -= gained;
    cur_mask.clear(v);
    cur.pop_back();
  }
};

} // namespace

DenseSubsetResult max_dense_subset_bruteforce(const Hypergraph& g,
                                              std::int64_t size_cap,
                                              const BigInt& budget, int workers) {
  validate(g);
  if (size_cap < 0)
    throw Error(ErrKind::precondition, "max_dense_subset_bruteforce: size_cap must be >= 0");
  std::int64_t cap = std::min<std::int64_t>(size_cap, g.n_vertices);
  BigInt candidates = 0;
  for (std::int64_t u = 0; u <= cap; ++u) candidates += binomial(g.n_vertices, u);
  if (candidates > budget)
    throw BudgetExceeded(candidates, budget,
                         "brute-force scan needs " + candidates.str() +
                             " candidate subsets, budget is " + budget.str());

  // Edge masks over distinct vertices, grouped by their largest vertex. An
  // edge is counted exactly once: when its largest vertex joins the subset.
  std::vector<Mask> edge_masks;
  edge_masks.reserve(g.edges.size());
  std::vector<std::uint32_t> edge_max;
  edge_max.reserve(g.edges.size());
  for (const Edge& e : g.edges) {
    Mask m(g.n_vertices);
    std::uint32_t mx = 0;
    for (auto v : e) {
      m.set(v);
      mx = std::max(mx, v);
    }
    edge_masks.push_back(std::move(m));
    edge_max.push_back(mx);
  }
  std::vector<std::vector<const Mask*>> by_max(static_cast<std::size_t>(g.n_vertices));
  for (std::size_t i = 0; i < edge_masks.size(); ++i)
    by_max[edge_max[i]].push_back(&edge_masks[i]);

  DenseSubsetResult result;
  result.e = 0;
  result.subsets_checked = candidates;
  if (cap == 0 || g.n_vertices == 0) return result;

  std::uint32_t n = static_cast<std::uint32_t>(g.n_vertices);
  int nworkers = std::max(1, workers);
  auto run_roots = [&](int w) {
    ScanState st(by_max, cap, n);
    for (std::uint32_t r = static_cast<std::uint32_t>(w); r < n;
         r += static_cast<std::uint32_t>(nworkers))
      st.descend(r);
    return std::pair<std::int64_t, VertexSet>(st.best_e, st.best_u);
  };

  std::int64_t best_e = 0; // the empty set
  VertexSet best_u;
  if (nworkers == 1) {
    auto [e, u] = run_roots(0);
    if (e >= 0 && better_candidate(e, u, best_e, best_u)) {
      best_e = e;
      best_u = u;
    }
  } else {
    std::vector<std::future<std::pair<std::int64_t, VertexSet>>> futs;
    futs.reserve(static_cast<std::size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w)
      futs.push_back(std::async(std::launch::async, run_roots, w));
    for (auto& f : futs) {
      auto [e, u] = f.get();
      if (e >= 0 && better_candidate(e, u, best_e, best_u)) {
        best_e = e;
        best_u = u;
      }
    }
  }
  result.e = best_e;
  result.U = best_u;
  return result;
}

Rat induced_expectation(const Hypergraph& g, std::int64_t u) {
  if (g.kind != EdgeKind::distinct_set)
    throw Error(ErrKind::precondition, "induced_expectation: distinct_set graphs only");
  if (u < 0 || u > g.n_vertices)
    throw Error(ErrKind::precondition, "induced_expectation: need 0 <= u <= |V|");
  if (g.edges.empty()) return Rat(0);
  // every edge lies in a uniform u-subset with probability
  // prod_{i<k} (u - i) / (|V| - i)
  Rat p(1);
  for (std::int64_t i = 0; i < g.k; ++i) {
    if (u - i <= 0) return Rat(0);
    p *= Rat(BigInt(u - i), BigInt(g.n_vertices - i));
  }
  return Rat(BigInt(g.edges.size())) * p;
}

std::vector<Edge> canonical_edges(const Hypergraph& g) {
  std::vector<Edge> es = g.edges;
  std::sort(es.begin(), es.end());
  return es;
}

std::string serialize(const Hypergraph& g) {
  validate(g);
  json j;
  j["version"] = 1;
  j["n_vertices"] = g.n_vertices;
  j["k"] = g.k;
  j["edge_kind"] = g.kind == EdgeKind::distinct_set ? "distinct_set" : "ordered_tuple";
  json edges = json::array();
  for (const Edge& e : canonical_edges(g)) {
    json je = json::array();
    for (auto v : e) je.push_back(v);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

Hypergraph deserialize(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrKind::malformed_input, std::string("graph json: ") + e.what());
  }
  auto bad = [](const std::string& msg) { return Error(ErrKind::malformed_input, "graph json: " + msg); };
  if (!j.is_object()) throw bad("top level must be an object");
  for (const char* key : {"version", "n_vertices", "k", "edge_kind", "edges"})
    if (!j.contains(key)) throw bad(std::string("missing key '") + key + "'");
  if (!j["version"].is_number_integer() || j["version"].get<std::int64_t>() != 1)
    throw bad("unsupported version");
  if (!j["n_vertices"].is_number_integer() || !j["k"].is_number_integer())
    throw bad("n_vertices and k must be integers");
  Hypergraph g;
  g.n_vertices = j["n_vertices"].get<std::int64_t>();
  g.k = j["k"].get<int>();
  std::string kind = j["edge_kind"].is_string() ? j["edge_kind"].get<std::string>() : "";
  if (kind == "distinct_set") g.kind = EdgeKind::distinct_set;
  else if (kind == "ordered_tuple") g.kind = EdgeKind::ordered_tuple;
  else throw bad("edge_kind must be 'distinct_set' or 'ordered_tuple'");
  if (!j["edges"].is_array()) throw bad("edges must be an array");
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const json& je = j["edges"][i];
    if (!je.is_array()) throw bad("edges[" + std::to_string(i) + "] must be an array");
    Edge e;
    for (const json& jv : je) {
      if (!jv.is_number_integer() || jv.get<std::int64_t>() < 0)
        throw bad("edges[" + std::to_string(i) + "]: vertex ids must be nonnegative integers");
      std::int64_t v = jv.get<std::int64_t>();
      if (v > 0xffffffffLL) throw bad("edges[" + std::to_string(i) + "]: vertex id too large");
      e.push_back(static_cast<std::uint32_t>(v));
    }
    g.edges.push_back(std::move(e));
  }
  validate(g);
  return g;
}

Hypergraph trim_to_edge_count(const Hypergraph& g, std::int64_t m) {
  if (m < 0 || m > static_cast<std::int64_t>(g.edges.size()))
    throw Error(ErrKind::precondition, "trim_to_edge_count: need 0 <= m <= |E|");
  Hypergraph out = g;
  out.edges = canonical_edges(g);
  out.edges.resize(static_cast<std::size_t>(m));
  return out;
}

Hypergraph induced_subgraph(const Hypergraph& g, const VertexSet& u,
                            std::vector<std::uint32_t>* back_map) {
  validate_vertex_set(g, u);
  std::vector<std::int64_t> new_id(static_cast<std::size_t>(g.n_vertices), -1);
  for (std::size_t i = 0; i < u.size(); ++i) new_id[u[i]] = static_cast<std::int64_t>(i);
  Hypergraph out;
  out.n_vertices = static_cast<std::int64_t>(u.size());
  out.k = g.k;
  out.kind = g.kind;
  for (const Edge& e : g.edges) {
    Edge mapped;
    mapped.reserve(e.size());
    bool inside = true;
    for (auto v : e) {
      if (new_id[v] < 0) {
        inside = false;
        break;
      }
      mapped.push_back(static_cast<std::uint32_t>(new_id[v]));
    }
    if (inside) out.edges.push_back(std::move(mapped));
  }
  if (back_map) *back_map = u;
  validate(out);
  return out;
}

} // namespace spread
