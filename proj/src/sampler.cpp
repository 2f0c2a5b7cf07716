#include "spread/sampler.hpp"

#include "spread/attack.hpp"
#include "spread/rates.hpp"
#include "spread/rng.hpp"

#include <algorithm>

namespace spread {

namespace {

using json = nlohmann::json;

json json_big(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max())
    return json(static_cast<std::int64_t>(v));
  return json(v.str()); // beyond 64 bits: keep the exact value as a string
}

BigInt big_from_json(const json& j, const char* what) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw Error(ErrKind::malformed_input, std::string("certificate json: ") + what +
                                            " must be an integer or integer string");
}

constexpr std::int64_t kMaxSampleCandidates = 100000000; // 10^8

} // namespace

const char* verify_mode_name(VerifyMode m) {
  switch (m) {
    case VerifyMode::exhaustive: return "exhaustive";
    case VerifyMode::randomized: return "randomized";
    case VerifyMode::attack_assisted: return "attack_assisted";
  }
  return "unknown";
}

SpreadParams derive_spread_params(std::int64_t n, int k, const Rat& beta,
                                  std::int64_t D, std::uint64_t seed, int d_slack) {
  if (n < 1 || n > 30) throw Error(ErrKind::precondition, "spread params: need 1 <= n <= 30");
  if (k < 1) throw Error(ErrKind::precondition, "spread params: k must be >= 1");
  if (beta < 0 || beta > 1)
    throw Error(ErrKind::precondition, "spread params: beta must lie in [0, 1]");
  if (d_slack < 0) throw Error(ErrKind::precondition, "spread params: d_slack must be >= 0");

  SpreadParams p;
  p.n = n;
  p.k = k;
  p.beta = beta;
  p.D = D;
  p.d_slack = d_slack;
  p.seed = seed;
  p.alpha = alpha_from_beta(beta, k);
  p.f_n = floor_rat((Rat(k) - Rat(k - 1) * beta) * Rat(n));

  // dyadic edge probability min(1, 2^{D - ceil((k-1) beta n)})
  BigInt t_ceil = ceil_rat(Rat(k - 1) * beta * Rat(n));
  BigInt expo = BigInt(D) - t_ceil;
  if (expo >= 0) {
    p.dyadic_t = 0;
    p.edge_probability = Rat(1);
  } else {
    p.dyadic_t = static_cast<std::int64_t>(-expo);
    p.edge_probability = pow2_rat(-p.dyadic_t);
  }

  p.subset_cap = floor_pow_shift(2, beta * Rat(n));
  BigInt bound_core = ceil_pow_shift(2, p.alpha * Rat(p.f_n));
  p.edge_bound = bound_core << static_cast<unsigned>(d_slack);

  BigInt vertices = BigInt(1) << static_cast<unsigned>(n);
  p.expected_edges = Rat(binomial(vertices, k)) * p.edge_probability;
  p.target_edges = ceil_rat(p.expected_edges / 2);
  return p;
}

Hypergraph sample_spread(const SpreadParams& params) {
  if (params.n < 1 || params.n > 30 || params.k < 1)
    throw Error(ErrKind::precondition, "sample_spread: call derive_spread_params first");
  std::int64_t V = std::int64_t(1) << params.n;
  BigInt count = binomial(V, params.k);
  if (count > kMaxSampleCandidates)
    throw Error(ErrKind::scale_exceeded,
                "sample_spread: " + count.str() + " candidate edges exceeds the 10^8 cap");

  Hypergraph g;
  g.n_vertices = V;
  g.k = params.k;
  g.kind = EdgeKind::distinct_set;
  if (params.k > V) return g; // no k-subsets at all

  SplitMix64 rng(params.seed);
  std::uint64_t t = static_cast<std::uint64_t>(params.dyadic_t);
  // lexicographic enumeration of k-subsets, one draw per subset
  Edge c(static_cast<std::size_t>(params.k));
  for (int i = 0; i < params.k; ++i) c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
  while (true) {
    if (bernoulli_dyadic(rng, t)) g.edges.push_back(c);
    int i = params.k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] ==
                         static_cast<std::uint32_t>(V - params.k + i))
      --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < params.k; ++j)
      c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return g;
}

Hypergraph sample_tuple_spread(std::int64_t n, std::int64_t f_n, std::int64_t h_n,
                               std::uint64_t seed) {
  if (n < 1) throw Error(ErrKind::precondition, "sample_tuple_spread: n must be >= 1");
  if (f_n < n) throw Error(ErrKind::precondition, "sample_tuple_spread: need f_n >= n");
  if (h_n < 0 || h_n > 4)
    throw Error(ErrKind::precondition, "sample_tuple_spread: need 0 <= h_n <= 4");
  std::int64_t k = std::int64_t(1) << h_n;
  if (n * k > 24)
    throw Error(ErrKind::scale_exceeded,
                "sample_tuple_spread: tuple space 2^" + std::to_string(n * k) +
                    " exceeds the 2^24 desk-scale cap");

  std::int64_t V = std::int64_t(1) << n;
  std::int64_t expo = f_n - n * k + 3;
  std::uint64_t t = expo >= 0 ? 0 : static_cast<std::uint64_t>(-expo);

  Hypergraph g;
  g.n_vertices = V;
  g.k = static_cast<int>(k);
  g.kind = EdgeKind::ordered_tuple;

  SplitMix64 rng(seed);
  std::int64_t total = std::int64_t(1) << (n * k);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    if (!bernoulli_dyadic(rng, t)) continue;
    Edge e(static_cast<std::size_t>(k));
    std::int64_t rest = idx;
    for (std::int64_t pos = k - 1; pos >= 0; --pos) {
      e[static_cast<std::size_t>(pos)] = static_cast<std::uint32_t>(rest & (V - 1));
      rest >>= n;
    }
    g.edges.push_back(std::move(e));
  }
  return g;
}

namespace {

struct BestTracker {
  std::int64_t e = 0;
  VertexSet u; // empty set is always a legal candidate with e = 0

  void offer(std::int64_t cand_e, const VertexSet& cand_u) {
    if (better_candidate(cand_e, cand_u, e, u)) {
      e = cand_e;
      u = cand_u;
    }
  }
};

} // namespace

SpreadCertificate verify_spread(const Hypergraph& g, const BigInt& subset_cap,
                                const BigInt& edge_bound, const VerifyConfig& cfg) {
  validate(g);
  if (subset_cap < 0 || edge_bound < 0)
    throw Error(ErrKind::precondition, "verify_spread: cap and bound must be >= 0");

  std::int64_t cap = subset_cap > g.n_vertices
                         ? g.n_vertices
                         : static_cast<std::int64_t>(subset_cap);

  SpreadCertificate cert;
  cert.mode = verify_mode_name(cfg.mode);
  cert.params["n_vertices"] = g.n_vertices;
  cert.params["k"] = g.k;
  cert.params["edge_kind"] = g.kind == EdgeKind::distinct_set ? "distinct_set" : "ordered_tuple";
  cert.params["subset_cap"] = json_big(subset_cap);
  cert.params["edge_bound"] = json_big(edge_bound);

  BestTracker best;
  BigInt checked = 0;

  if (cfg.mode == VerifyMode::exhaustive) {
    DenseSubsetResult res = max_dense_subset_bruteforce(g, cap, cfg.budget, cfg.workers);
    best.offer(res.e, res.U);
    checked = res.subsets_checked;
  } else {
    cert.params["trials_per_stratum"] = cfg.trials_per_stratum;
    cert.params["seed"] = cfg.seed;
    std::uint32_t V = static_cast<std::uint32_t>(g.n_vertices);
    // stratum sub-seeds depend only on (seed, u): growing the cap adds strata
    // without disturbing existing ones, which keeps max_e monotone in the cap
    for (std::int64_t u = 1; u <= cap; ++u) {
      SplitMix64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(u)));
      for (std::int64_t trial = 0; trial < cfg.trials_per_stratum; ++trial) {
        VertexSet cand = random_subset(rng, V, static_cast<std::uint32_t>(u));
        best.offer(edge_count_within(g, cand), cand);
        ++checked;
      }
    }
    for (std::int64_t u = 1; u <= cap; ++u) {
      VertexSet cand = densify(g, u, /*best_effort=*/true);
      best.offer(edge_count_within(g, cand), cand);
      ++checked;
    }
    if (cfg.mode == VerifyMode::attack_assisted && g.k >= 2 && cap >= 1) {
      Rat beta = cfg.attack_beta.value_or(
          Rat(BigInt(subset_cap > 1 ? boost::multiprecision::msb(subset_cap) : 0),
              BigInt(g.n_vertices > 1
                         ? boost::multiprecision::msb(BigInt(g.n_vertices))
                         : 1)));
      if (beta > 1) beta = Rat(1);
      cert.params["attack_beta"] = rat_str(beta);
      cert.params["attack_D"] = cfg.attack_D;
      AttackConfig acfg;
      acfg.seed = mix_seed(cfg.seed, 0xa77ac4ULL);
      AttackResult ar = find_dense_subset(g, beta, cfg.attack_D, acfg);
      if (static_cast<std::int64_t>(ar.U.size()) <= cap) {
        best.offer(ar.e_U, ar.U);
        ++checked;
      }
    }
  }

  cert.max_U = best.u;
  cert.max_e = best.e;
  cert.subsets_checked = checked;
  cert.pass = BigInt(best.e) < edge_bound;
  return cert;
}

std::string serialize_certificate(const SpreadCertificate& c) {
  json j;
  j["params"] = c.params;
  j["mode"] = c.mode;
  json u = json::array();
  for (auto v : c.max_U) u.push_back(v);
  j["max_U"] = std::move(u);
  j["max_e"] = c.max_e;
  j["subsets_checked"] = json_big(c.subsets_checked);
  j["attempts"] = c.attempts;
  j["pass"] = c.pass;
  return j.dump(2) + "\n";
}

SpreadCertificate deserialize_certificate(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrKind::malformed_input, std::string("certificate json: ") + e.what());
  }
  auto bad = [](const std::string& m) {
    return Error(ErrKind::malformed_input, "certificate json: " + m);
  };
  if (!j.is_object()) throw bad("top level must be an object");
  for (const char* key : {"params", "mode", "max_U", "max_e", "subsets_checked", "attempts", "pass"})
    if (!j.contains(key)) throw bad(std::string("missing key '") + key + "'");
  SpreadCertificate c;
  c.params = j["params"];
  if (!j["mode"].is_string()) throw bad("mode must be a string");
  c.mode = j["mode"].get<std::string>();
  if (!j["max_U"].is_array()) throw bad("max_U must be an array");
  for (const json& v : j["max_U"]) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw bad("max_U entries must be ids");
    c.max_U.push_back(static_cast<std::uint32_t>(v.get<std::int64_t>()));
  }
  if (!j["max_e"].is_number_integer()) throw bad("max_e must be an integer");
  c.max_e = j["max_e"].get<std::int64_t>();
  c.subsets_checked = big_from_json(j["subsets_checked"], "subsets_checked");
  if (!j["attempts"].is_number_integer()) throw bad("attempts must be an integer");
  c.attempts = j["attempts"].get<std::int64_t>();
  if (!j["pass"].is_boolean()) throw bad("pass must be a boolean");
  c.pass = j["pass"].get<bool>();
  return c;
}

namespace {

void echo_construct_params(SpreadCertificate& cert, const SpreadParams& p,
                           std::uint64_t seed_used) {
  cert.params["n"] = p.n;
  cert.params["beta"] = rat_str(p.beta);
  cert.params["alpha"] = rat_str(p.alpha);
  cert.params["D"] = p.D;
  cert.params["d_slack"] = p.d_slack;
  cert.params["f_n"] = json_big(p.f_n);
  cert.params["seed"] = seed_used;
  cert.params["base_seed"] = p.seed;
  cert.params["edge_probability"] = rat_str(p.edge_probability);
  cert.params["expected_edges"] = rat_str(p.expected_edges);
  cert.params["target_edges"] = json_big(p.target_edges);
  // expected per-attempt failure probability of the edge-count test
  if (p.expected_edges > 0 && Rat(p.target_edges) <= p.expected_edges) {
    Rat delta = Rat(1) - Rat(p.target_edges) / p.expected_edges;
    if (delta >= 0 && delta <= 1)
      cert.params["edge_lower_tail_budget"] =
          rat_str(chernoff_budget(p.expected_edges, delta, Tail::lower));
  }
}

} // namespace

ConstructResult construct_certified(const SpreadParams& params,
                                    std::int64_t max_attempts,
                                    const VerifyConfig& cfg) {
  if (max_attempts < 1)
    throw Error(ErrKind::precondition, "construct_certified: max_attempts must be >= 1");

  bool have_best = false;
  bool best_met_target = false;
  std::int64_t best_edges = -1;
  std::int64_t best_max_e = 0;
  Hypergraph best_graph;
  SpreadCertificate best_cert;
  std::uint64_t best_seed = 0;

  for (std::int64_t attempt = 0; attempt < max_attempts; ++attempt) {
    SpreadParams p = params;
    p.seed = params.seed + static_cast<std::uint64_t>(attempt);
    Hypergraph g = sample_spread(p);
    std::int64_t edges = static_cast<std::int64_t>(g.edges.size());
    bool met = BigInt(edges) >= params.target_edges;
    if (met) {
      SpreadCertificate cert = verify_spread(g, params.subset_cap, params.edge_bound, cfg);
      cert.attempts = attempt + 1;
      echo_construct_params(cert, params, p.seed);
      if (cert.pass) return ConstructResult{std::move(g), std::move(cert), p.seed, attempt + 1};
      if (!have_best || !best_met_target || cert.max_e < best_max_e) {
        have_best = true;
        best_met_target = true;
        best_max_e = cert.max_e;
        best_edges = edges;
        best_graph = std::move(g);
        best_cert = std::move(cert);
        best_seed = p.seed;
      }
    } else if (!best_met_target && edges > best_edges) {
      have_best = true;
      best_edges = edges;
      best_graph = std::move(g);
      best_seed = p.seed;
    }
  }

  if (!best_met_target && have_best) {
    best_cert = verify_spread(best_graph, params.subset_cap, params.edge_bound, cfg);
    best_cert.attempts = max_attempts;
    echo_construct_params(best_cert, params, best_seed);
  }
  ConstructResult best{std::move(best_graph), std::move(best_cert), best_seed, max_attempts};
  throw AttemptsExhausted(std::move(best),
                          "construct_certified: no certified graph with >= " +
                              params.target_edges.str() + " edges in " +
                              std::to_string(max_attempts) + " attempts");
}

Rat chernoff_budget(const Rat& mu, const Rat& delta, Tail tail) {
  if (mu < 0) throw Error(ErrKind::precondition, "chernoff_budget: mu must be >= 0");
  if (tail == Tail::upper) {
    if (delta < 6)
      throw Error(ErrKind::precondition, "chernoff_budget: upper tail requires delta >= 6");
    // 2^{-v} <= 2^{-floor(v)} (1 - frac(v)/2), exact when v is an integer
    Rat v = delta * mu;
    BigInt w = floor_rat(v);
    if (w > 1000000)
      throw Error(ErrKind::scale_exceeded, "chernoff_budget: exponent too large");
    Rat frac = v - Rat(w);
    return pow2_rat(-static_cast<std::int64_t>(w)) * (Rat(1) - frac / 2);
  }
  if (delta < 0 || delta > 1)
    throw Error(ErrKind::precondition, "chernoff_budget: lower tail requires 0 <= delta <= 1");
  // e^{-x} <= 1 / sum_{i<=30} x^i / i!
  Rat x = delta * delta * mu / 2;
  Rat term(1), sum(1);
  for (int i = 1; i <= 30; ++i) {
    term *= x / i;
    sum += term;
  }
  return Rat(1) / sum;
}

} // namespace spread
