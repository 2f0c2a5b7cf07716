#include "spread/extractor.hpp"

#include "spread/errors.hpp"
#include "spread/rates.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <map>

namespace spread {

namespace {

void check_widths(int n, int f_n, int k) {
  if (n < 1 || n > 62) throw Error(ErrKind::precondition, "family: n must be in [1, 62]");
  if (f_n < 0 || f_n > 24) throw Error(ErrKind::precondition, "family: f_n must be in [0, 24]");
  if (k < 1 || k > 64) throw Error(ErrKind::precondition, "family: k must be in [1, 64]");
}

std::uint64_t row_count(int f_n) { return std::uint64_t{1} << f_n; }

} // namespace

std::string to_bits(std::uint64_t value, int width) {
  if (width < 0 || width > 62) throw Error(ErrKind::precondition, "to_bits: width must be in [0, 62]");
  if (width < 62 && value >= (std::uint64_t{1} << width))
    throw Error(ErrKind::precondition, "to_bits: value does not fit the width");
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i)
    if (value >> (width - 1 - i) & 1) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

std::uint64_t from_bits(const std::string& bits, int width) {
  if (static_cast<int>(bits.size()) != width)
    throw Error(ErrKind::malformed_input, "bit string has wrong width");
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(ErrKind::malformed_input, "bit string has non-binary character");
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

void validate_family(const ExtractorFamily& fam) {
  check_widths(fam.n, fam.f_n, fam.k);
  if (static_cast<int>(fam.tables.size()) != fam.k)
    throw Error(ErrKind::malformed_input, "family: expected k tables");
  const std::uint64_t rows = row_count(fam.f_n);
  const std::uint64_t lim = std::uint64_t{1} << fam.n;
  for (const auto& t : fam.tables) {
    if (t.size() != rows) throw Error(ErrKind::malformed_input, "family: table has wrong row count");
    for (std::uint64_t v : t)
      if (v >= lim) throw Error(ErrKind::malformed_input, "family: output exceeds n bits");
  }
}

void validate_family(const PartialExtractorFamily& fam) {
  check_widths(fam.n, fam.f_n, fam.k);
  if (static_cast<int>(fam.tables.size()) != fam.k)
    throw Error(ErrKind::malformed_input, "family: expected k tables");
  const std::uint64_t rows = row_count(fam.f_n);
  const std::uint64_t lim = std::uint64_t{1} << fam.n;
  for (const auto& t : fam.tables) {
    if (t.size() != rows) throw Error(ErrKind::malformed_input, "family: table has wrong row count");
    for (const auto& v : t)
      if (v && *v >= lim) throw Error(ErrKind::malformed_input, "family: output exceeds n bits");
  }
}

PartialExtractorFamily to_partial(const ExtractorFamily& fam) {
  validate_family(fam);
  PartialExtractorFamily p;
  p.n = fam.n;
  p.f_n = fam.f_n;
  p.k = fam.k;
  p.tables.resize(fam.tables.size());
  for (std::size_t i = 0; i < fam.tables.size(); ++i)
    p.tables[i].assign(fam.tables[i].begin(), fam.tables[i].end());
  return p;
}

ExtractorFamily to_total(const PartialExtractorFamily& fam) {
  validate_family(fam);
  ExtractorFamily t;
  t.n = fam.n;
  t.f_n = fam.f_n;
  t.k = fam.k;
  t.tables.resize(fam.tables.size());
  for (std::size_t i = 0; i < fam.tables.size(); ++i) {
    t.tables[i].reserve(fam.tables[i].size());
    for (const auto& v : fam.tables[i]) {
      if (!v) throw Error(ErrKind::precondition, "to_total: family has undefined entries");
      t.tables[i].push_back(*v);
    }
  }
  return t;
}

ExtractorFamily family_from_graph(const Hypergraph& g, int f_n) {
  validate(g);
  if (g.n_vertices < 2) throw Error(ErrKind::precondition, "family_from_graph: need at least 2 vertices");
  const int n_bits = std::bit_width(static_cast<std::uint64_t>(g.n_vertices)) - 1;
  if ((std::int64_t{1} << n_bits) != g.n_vertices)
    throw Error(ErrKind::precondition, "family_from_graph: n_vertices must be a power of two");
  check_widths(n_bits, f_n, g.k);
  if (static_cast<std::uint64_t>(g.edges.size()) != row_count(f_n))
    throw Error(ErrKind::precondition, "family_from_graph: edge count must equal 2^{f_n}");

  const std::vector<Edge> edges = canonical_edges(g);
  ExtractorFamily fam;
  fam.n = n_bits;
  fam.f_n = f_n;
  fam.k = g.k;
  fam.tables.assign(static_cast<std::size_t>(g.k),
                    std::vector<std::uint64_t>(edges.size(), 0));
  for (std::size_t sigma = 0; sigma < edges.size(); ++sigma)
    for (int i = 0; i < g.k; ++i)
      fam.tables[static_cast<std::size_t>(i)][sigma] = edges[sigma][static_cast<std::size_t>(i)];
  return fam;
}

Hypergraph graph_from_family(const ExtractorFamily& fam) {
  validate_family(fam);
  Hypergraph g;
  g.n_vertices = std::int64_t{1} << fam.n;
  g.k = fam.k;
  g.kind = EdgeKind::distinct_set;
  const std::uint64_t rows = row_count(fam.f_n);
  g.edges.reserve(rows);
  for (std::uint64_t sigma = 0; sigma < rows; ++sigma) {
    Edge e(static_cast<std::size_t>(fam.k));
    for (int i = 0; i < fam.k; ++i)
      e[static_cast<std::size_t>(i)] =
          static_cast<std::uint32_t>(fam.tables[static_cast<std::size_t>(i)][sigma]);
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      throw Error(ErrKind::nondistinct_outputs,
                  "graph_from_family: row " + to_bits(sigma, fam.f_n) +
                      " repeats an output; run distinctify first");
    g.edges.push_back(std::move(e));
  }
  validate(g);
  return g;
}

ExtractorFamily distinctify(const ExtractorFamily& fam) {
  validate_family(fam);
  const std::uint64_t lim = std::uint64_t{1} << fam.n;
  if (static_cast<std::uint64_t>(fam.k) > lim)
    throw Error(ErrKind::precondition, "distinctify: k exceeds 2^n, no distinct completion exists");
  ExtractorFamily out = fam;
  const std::uint64_t rows = row_count(fam.f_n);
  for (std::uint64_t sigma = 0; sigma < rows; ++sigma) {
    // B_sigma = the row's value set padded with the lex-smallest unused
    // strings to k elements; the new row lists B_sigma ascending. Applies to
    // every row, so collision-free rows come out sorted too.
    std::vector<std::uint64_t> sorted(static_cast<std::size_t>(fam.k));
    for (int i = 0; i < fam.k; ++i)
      sorted[static_cast<std::size_t>(i)] = fam.tables[static_cast<std::size_t>(i)][sigma];
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::uint64_t next = 0;
    std::size_t probe = 0;
    while (sorted.size() < static_cast<std::size_t>(fam.k)) {
      while (probe < sorted.size() && sorted[probe] < next) ++probe;
      if (probe < sorted.size() && sorted[probe] == next) {
        ++next;
        continue;
      }
      sorted.insert(sorted.begin() + static_cast<std::ptrdiff_t>(probe), next);
      ++next;
    }
    for (int i = 0; i < fam.k; ++i)
      out.tables[static_cast<std::size_t>(i)][sigma] = sorted[static_cast<std::size_t>(i)];
  }
  return out;
}

std::string serialize_family(const PartialExtractorFamily& fam) {
  validate_family(fam);
  nlohmann::json tables = nlohmann::json::array();
  const std::uint64_t rows = row_count(fam.f_n);
  for (int i = 0; i < fam.k; ++i) {
    nlohmann::json t = nlohmann::json::object();
    for (std::uint64_t sigma = 0; sigma < rows; ++sigma) {
      const auto& v = fam.tables[static_cast<std::size_t>(i)][sigma];
      const std::string key = to_bits(sigma, fam.f_n);
      if (v)
        t[key] = to_bits(*v, fam.n);
      else
        t[key] = nullptr;
    }
    tables.push_back(std::move(t));
  }
  nlohmann::json j{{"n", fam.n}, {"f_n", fam.f_n}, {"k", fam.k}, {"tables", tables}};
  return j.dump(2) + "\n";
}

PartialExtractorFamily deserialize_family(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrKind::malformed_input, std::string("family: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrKind::malformed_input, "family: top level must be an object");
  for (const char* key : {"n", "f_n", "k"})
    if (!j.contains(key) || !j[key].is_number_integer())
      throw Error(ErrKind::malformed_input, std::string("family: missing integer field ") + key);
  PartialExtractorFamily fam;
  fam.n = j["n"].get<int>();
  fam.f_n = j["f_n"].get<int>();
  fam.k = j["k"].get<int>();
  check_widths(fam.n, fam.f_n, fam.k);
  if (!j.contains("tables") || !j["tables"].is_array() ||
      static_cast<int>(j["tables"].size()) != fam.k)
    throw Error(ErrKind::malformed_input, "family: tables must be an array of k objects");
  const std::uint64_t rows = row_count(fam.f_n);
  fam.tables.assign(static_cast<std::size_t>(fam.k),
                    std::vector<std::optional<std::uint64_t>>(static_cast<std::size_t>(rows)));
  for (int i = 0; i < fam.k; ++i) {
    const nlohmann::json& t = j["tables"][static_cast<std::size_t>(i)];
    if (!t.is_object() || t.size() != rows)
      throw Error(ErrKind::malformed_input, "family: each table must list every input once");
    for (auto it = t.begin(); it != t.end(); ++it) {
      const std::uint64_t sigma = from_bits(it.key(), fam.f_n);
      auto& slot = fam.tables[static_cast<std::size_t>(i)][static_cast<std::size_t>(sigma)];
      if (it.value().is_null()) {
        slot = std::nullopt;
      } else if (it.value().is_string()) {
        slot = from_bits(it.value().get<std::string>(), fam.n);
      } else {
        throw Error(ErrKind::malformed_input, "family: outputs must be bit strings or null");
      }
    }
  }
  validate_family(fam);
  return fam;
}

AdversaryResult adversary_partial(const std::vector<std::uint64_t>& D_n,
                                  const PartialExtractorFamily& fam, int phi_n) {
  validate_family(fam);
  if (phi_n < 0 || phi_n > fam.n)
    throw Error(ErrKind::precondition, "adversary_partial: phi_n must be in [0, n]");
  // each B_i holds exactly 2^{phi_n} strings, so they have to fit in memory
  if (phi_n > 20)
    throw Error(ErrKind::scale_exceeded, "adversary_partial: phi_n > 20 makes B too large to materialize");
  const std::uint64_t rows = row_count(fam.f_n);
  for (std::size_t i = 0; i < D_n.size(); ++i) {
    if (D_n[i] >= rows) throw Error(ErrKind::malformed_input, "adversary_partial: input exceeds f_n bits");
    if (i > 0 && D_n[i] <= D_n[i - 1])
      throw Error(ErrKind::malformed_input, "adversary_partial: D_n must be strictly ascending");
  }

  // Symmetrize: the i-th component becomes the i-th distinct defined value of
  // the row, in first-appearance order. Rows then never repeat a value, which
  // is what the per-round popularity counting assumes.
  std::vector<std::vector<std::uint64_t>> distinct_vals(static_cast<std::size_t>(rows));
  for (std::uint64_t sigma = 0; sigma < rows; ++sigma) {
    auto& dv = distinct_vals[static_cast<std::size_t>(sigma)];
    for (int i = 0; i < fam.k; ++i) {
      const auto& v = fam.tables[static_cast<std::size_t>(i)][static_cast<std::size_t>(sigma)];
      if (!v) continue;
      if (std::find(dv.begin(), dv.end(), *v) == dv.end()) dv.push_back(*v);
    }
  }

  AdversaryResult out;
  out.trace = nlohmann::json::array();
  std::vector<std::uint64_t> A = D_n;
  std::vector<std::uint64_t> B;
  const std::uint64_t b_cap = std::uint64_t{1} << phi_n;

  for (int round = 1; round <= fam.k; ++round) {
    const std::int64_t a = static_cast<std::int64_t>(A.size());
    std::vector<std::uint64_t> dom, undef;
    for (std::uint64_t sigma : A) {
      if (distinct_vals[static_cast<std::size_t>(sigma)].size() >= static_cast<std::size_t>(round))
        dom.push_back(sigma);
      else
        undef.push_back(sigma);
    }
    if (2 * static_cast<std::int64_t>(dom.size()) < a) {
      // stall: more than half the survivors have no round-th distinct value
      out.stalled = true;
      out.trace.push_back({{"round", round},
                           {"survivors", a},
                           {"defined", static_cast<std::int64_t>(dom.size())},
                           {"stalled", true}});
      A = std::move(undef);
      break;
    }
    const std::int64_t m = (a + 1) / 2;
    dom.resize(static_cast<std::size_t>(m)); // first m in ascending sigma order
    std::map<std::uint64_t, std::int64_t> pop;
    for (std::uint64_t sigma : dom)
      ++pop[distinct_vals[static_cast<std::size_t>(sigma)][static_cast<std::size_t>(round - 1)]];
    std::vector<std::pair<std::uint64_t, std::int64_t>> ranked(pop.begin(), pop.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
      if (x.second != y.second) return x.second > y.second;
      return x.first < y.first;
    });
    if (ranked.size() > b_cap) ranked.resize(static_cast<std::size_t>(b_cap));
    std::vector<std::uint64_t> b_round;
    b_round.reserve(static_cast<std::size_t>(b_cap));
    for (const auto& [val, c] : ranked) b_round.push_back(val);
    std::sort(b_round.begin(), b_round.end());
    // B_i has exactly 2^{phi_n} strings: zero-preimage values tie at zero and
    // lose lexicographic tie-breaks to each other, so the smallest fill in
    const std::uint64_t lim = std::uint64_t{1} << fam.n;
    const std::size_t ranked_end = b_round.size();
    for (std::uint64_t v = 0; v < lim && b_round.size() < static_cast<std::size_t>(b_cap); ++v)
      if (!std::binary_search(b_round.begin(), b_round.begin() + static_cast<std::ptrdiff_t>(ranked_end), v))
        b_round.push_back(v);
    std::sort(b_round.begin(), b_round.end());
    std::vector<std::uint64_t> next;
    for (std::uint64_t sigma : dom) {
      const std::uint64_t v =
          distinct_vals[static_cast<std::size_t>(sigma)][static_cast<std::size_t>(round - 1)];
      if (std::binary_search(b_round.begin(), b_round.end(), v)) next.push_back(sigma);
    }
    out.trace.push_back({{"round", round},
                         {"survivors", a},
                         {"defined", static_cast<std::int64_t>(dom.size()) },
                         {"kept", m},
                         {"B_round", static_cast<std::int64_t>(b_round.size())},
                         {"after", static_cast<std::int64_t>(next.size())}});
    B.insert(B.end(), b_round.begin(), b_round.end());
    A = std::move(next);
    out.rounds = round;
  }

  std::sort(B.begin(), B.end());
  B.erase(std::unique(B.begin(), B.end()), B.end());
  out.E_n = std::move(A);
  out.B = std::move(B);
  return out;
}

namespace {

std::vector<std::pair<int, std::string>> extract_level(const std::string& x, int level,
                                                       std::int64_t n, const Rat& beta,
                                                       int d, DescriptionOracle& oracle) {
  // every level sees the prefix-length chain value for its own rate
  assert(static_cast<std::int64_t>(x.size()) ==
         floor_rat((Rat(level) - Rat(level - 1) * beta) * n));
  if (level == 1) return {{1, x}};
  const std::optional<std::string> desc =
      oracle.query(x, static_cast<int>(n) + d, static_cast<int>(n) + 2 * d);
  if (desc) {
    if (static_cast<std::int64_t>(desc->size()) < n + d ||
        static_cast<std::int64_t>(desc->size()) > n + 2 * d)
      throw Error(ErrKind::oracle_contract, "description length outside the requested window");
    for (char c : *desc)
      if (c != '0' && c != '1')
        throw Error(ErrKind::oracle_contract, "description is not a bit string");
    // compressible at this level: the component outputs the description's n-bit prefix
    return {{level, desc->substr(0, static_cast<std::size_t>(n))}};
  }
  const Rat ratio = Rat(level - 1) - Rat(level - 2) * beta;
  const std::int64_t len = static_cast<std::int64_t>(floor_rat(ratio * n));
  return extract_level(x.substr(0, static_cast<std::size_t>(len)), level - 1, n, beta, d, oracle);
}

} // namespace

std::vector<std::pair<int, std::string>> threshold_extract(const std::string& x,
                                                           DescriptionOracle& oracle,
                                                           const Rat& beta, int k,
                                                           int d) {
  if (k < 1) throw Error(ErrKind::precondition, "threshold_extract: k must be >= 1");
  if (beta < 0 || beta > 1) throw Error(ErrKind::precondition, "threshold_extract: beta must be in [0, 1]");
  if (d < 0) throw Error(ErrKind::precondition, "threshold_extract: d must be >= 0");
  for (char c : x)
    if (c != '0' && c != '1') throw Error(ErrKind::malformed_input, "threshold_extract: x must be a bit string");

  // the base family is the identity regardless of |x|
  if (k == 1) return {{1, x}};

  // |x| = floor((k - (k-1) beta) n) pins n; the slope is >= 1 so n <= |x|
  const Rat slope = Rat(k) - Rat(k - 1) * beta;
  const std::int64_t len = static_cast<std::int64_t>(x.size());
  std::int64_t n = -1;
  for (std::int64_t cand = 1; cand <= len; ++cand) {
    if (floor_rat(slope * cand) == len) {
      n = cand;
      break;
    }
    if (floor_rat(slope * cand) > len) break;
  }
  if (n < 0)
    throw Error(ErrKind::length_mismatch, "threshold_extract: |x| matches no input length at this rate");
  return extract_level(x, k, n, beta, d, oracle);
}

} // namespace spread
