#include "spread/game.hpp"

#include "spread/attack.hpp"
#include "spread/errors.hpp"

#include <algorithm>

namespace spread {

GameOutcome play(const Hypergraph& g, const GameConfig& cfg) {
  validate(g);
  if (cfg.adversary_budget < 0)
    throw Error(ErrKind::precondition, "play: adversary_budget must be >= 0");
  if (cfg.responder_budget < 0)
    throw Error(ErrKind::precondition, "play: responder_budget must be >= 0");

  VertexSet U;
  switch (cfg.strategy) {
    case Strategy::exhaustive: {
      DenseSubsetResult r = max_dense_subset_bruteforce(g, cfg.adversary_budget,
                                                        cfg.brute_budget, cfg.workers);
      U = std::move(r.U);
      break;
    }
    case Strategy::greedy_attack: {
      if (!cfg.attack_beta)
        throw Error(ErrKind::precondition, "play: greedy_attack needs attack_beta");
      const BigInt cap = floor_pow_shift(BigInt(g.n_vertices), *cfg.attack_beta);
      if (cap > cfg.adversary_budget)
        throw Error(ErrKind::precondition,
                    "play: attack cap floor(V^beta) exceeds the adversary budget");
      AttackConfig acfg;
      acfg.seed = cfg.seed;
      AttackResult r = find_dense_subset(g, *cfg.attack_beta, cfg.attack_D, acfg);
      U = std::move(r.U);
      break;
    }
    case Strategy::explicit_set: {
      if (!cfg.explicit_U)
        throw Error(ErrKind::precondition, "play: explicit_set needs explicit_U");
      U = *cfg.explicit_U;
      validate_vertex_set(g, U);
      if (static_cast<std::int64_t>(U.size()) > cfg.adversary_budget)
        throw Error(ErrKind::precondition, "play: explicit U exceeds the adversary budget");
      break;
    }
  }

  GameOutcome out;
  out.U = std::move(U);

  // the responder must name exactly the edges inside U, indexed canonically
  const std::vector<Edge> canon = canonical_edges(g);
  std::vector<char> in_U(static_cast<std::size_t>(g.n_vertices), 0);
  for (std::uint32_t v : out.U) in_U[v] = 1;
  std::vector<std::int64_t> sigmas;
  for (std::size_t i = 0; i < canon.size(); ++i) {
    bool inside = true;
    for (std::uint32_t v : canon[i])
      if (!in_U[v]) {
        inside = false;
        break;
      }
    if (inside) {
      ++out.forced_count;
      if (sigmas.size() < 64) sigmas.push_back(static_cast<std::int64_t>(i));
    }
  }
  out.witness_complete = out.forced_count <= 64;
  if (out.witness_complete) out.witness_sigmas = std::move(sigmas);
  out.responder_within_budget = BigInt(out.forced_count) <= cfg.responder_budget;
  return out;
}

BigInt counting_bound(std::int64_t r) {
  if (r < 0) throw Error(ErrKind::precondition, "counting_bound: r must be >= 0");
  if (r > 1000000) throw Error(ErrKind::scale_exceeded, "counting_bound: r above 1e6");
  return (BigInt(1) << static_cast<unsigned>(r + 1)) - 1;
}

BigInt enumeration_budget(const std::vector<BigInt>& sizes, std::size_t n,
                          const BigInt& cond_complexity, const BigInt& c_model) {
  if (n >= sizes.size())
    throw Error(ErrKind::precondition, "enumeration_budget: n out of range for sizes");
  if (cond_complexity < 0 || c_model < 0)
    throw Error(ErrKind::precondition, "enumeration_budget: complexities must be >= 0");
  return sizes[n] + 2 * cond_complexity + c_model;
}

} // namespace spread
