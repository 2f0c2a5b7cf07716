#pragma once

// Extractor families encoded by spread hypergraphs: the two-way graph/family
// correspondence, collision removal, the halving adversary against partial
// families, and the recursive threshold-case extractor built on a description
// oracle.

#include "spread/hypergraph.hpp"
#include "spread/numeric.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace spread {

// bit strings are rendered most significant bit first
std::string to_bits(std::uint64_t value, int width);
std::uint64_t from_bits(const std::string& bits, int width);

// k component functions {0,1}^{f_n} -> {0,1}^n stored as flat tables indexed
// by the input's integer value; tables[i][sigma] is Gamma_{i+1}(sigma)
struct ExtractorFamily {
  int n = 1;
  int f_n = 0;
  int k = 1;
  std::vector<std::vector<std::uint64_t>> tables;
};

struct PartialExtractorFamily {
  int n = 1;
  int f_n = 0;
  int k = 1;
  std::vector<std::vector<std::optional<std::uint64_t>>> tables;
};

void validate_family(const ExtractorFamily& fam);
void validate_family(const PartialExtractorFamily& fam);

PartialExtractorFamily to_partial(const ExtractorFamily& fam);
// errors on any undefined entry
ExtractorFamily to_total(const PartialExtractorFamily& fam);

// Edge sigma (canonical order) lists the k outputs on input sigma. Requires
// n_vertices = 2^n for some n >= 1, ordered_tuple kind, and |E| = 2^{f_n}.
ExtractorFamily family_from_graph(const Hypergraph& g, int f_n);

// Inverse: vertex set {0,1}^n, edge sigma = (Gamma_1(sigma), ..,
// Gamma_k(sigma)). Rows with repeated outputs make the distinct_set reading
// ill-defined, so callers wanting sets must distinctify first; the tuple
// graph is returned as is.
Hypergraph graph_from_family(const ExtractorFamily& fam);

// Collision removal: each row's outputs are replaced by the k lex-smallest
// distinct strings among its own outputs padded with the lex-smallest unused
// strings. Requires k <= 2^n. Rows without repeats are untouched.
ExtractorFamily distinctify(const ExtractorFamily& fam);

std::string serialize_family(const PartialExtractorFamily& fam);
PartialExtractorFamily deserialize_family(const std::string& text);

struct AdversaryResult {
  std::vector<std::uint64_t> E_n; // surviving inputs, ascending
  std::vector<std::uint64_t> B;   // forbidden outputs, ascending
  int rounds = 0;                 // completed halving rounds
  bool stalled = false;           // stopped on an undefined component
  nlohmann::json trace;
};

// Halving adversary: after a symmetrizing reorder of the component functions,
// round i keeps the half of the survivors whose Gamma_i value falls in the
// 2^{phi_n} most popular outputs, or harvests undefined inputs when Gamma_i
// stalls. Guarantees (checked by tests, not here): |B| <= k 2^{phi_n} and
// |E_n| >= ceil(|D_n| 2^{(phi_n - n - 1) k}).
AdversaryResult adversary_partial(const std::vector<std::uint64_t>& D_n,
                                  const PartialExtractorFamily& fam, int phi_n);

struct DescriptionOracle {
  virtual ~DescriptionOracle() = default;
  // some description of x whose length lies in [min_len, max_len], else nullopt
  virtual std::optional<std::string> query(const std::string& x, int min_len,
                                           int max_len) = 0;
};

// Threshold-case extractor at rate beta = threshold_beta(alpha, k). The output
// length n is derived from |x| = floor((k - (k-1) beta) n); level j short
// circuits to component j when the oracle certifies a description of length
// within [n + d, n + 2d], else recurses on the prefix at level j - 1. Returns
// the defined components as (index, value) pairs, index 1-based.
std::vector<std::pair<int, std::string>> threshold_extract(const std::string& x,
                                                           DescriptionOracle& oracle,
                                                           const Rat& beta, int k,
                                                           int d);

} // namespace spread
