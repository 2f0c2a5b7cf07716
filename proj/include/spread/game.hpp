#pragma once

// Description game over a certified graph: the adversary names a vertex set
// within budget, the responder must enumerate every edge inside it. Also the
// counting side: how many strings short descriptions can name, and the
// enumeration budget a dense subset forces.

#include "spread/hypergraph.hpp"
#include "spread/numeric.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace spread {

enum class Strategy { exhaustive, greedy_attack, explicit_set };

struct GameConfig {
  std::int64_t adversary_budget = 0; // max |U|
  BigInt responder_budget = 0;       // max edges the responder may enumerate
  Strategy strategy = Strategy::exhaustive;
  std::optional<VertexSet> explicit_U; // explicit_set
  std::optional<Rat> attack_beta;      // greedy_attack
  std::int64_t attack_D = 0;
  BigInt brute_budget = BigInt(10000000); // exhaustive subset budget
  std::uint64_t seed = 0;
  int workers = 1;
};

struct GameOutcome {
  VertexSet U;
  std::int64_t forced_count = 0;
  bool responder_within_budget = false;
  // canonical edge indices inside U, listed only when forced_count <= 64
  std::vector<std::int64_t> witness_sigmas;
  bool witness_complete = false;
};

GameOutcome play(const Hypergraph& g, const GameConfig& cfg);

// descriptions of length <= r name at most 2^{r+1} - 1 strings
BigInt counting_bound(std::int64_t r);

// sizes[n] + 2 * cond_complexity + c_model; sizes is indexed by n
BigInt enumeration_budget(const std::vector<BigInt>& sizes, std::size_t n,
                          const BigInt& cond_complexity,
                          const BigInt& c_model = BigInt(0));

} // namespace spread
