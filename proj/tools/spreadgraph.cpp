// Command-line front door. Every subcommand is file-based and deterministic:
// identical argv + input files give identical output files. A RunManifest with
// input/output digests is written alongside the first output file.

#include "spread/attack.hpp"
#include "spread/errors.hpp"
#include "spread/extractor.hpp"
#include "spread/game.hpp"
#include "spread/hypergraph.hpp"
#include "spread/rates.hpp"
#include "spread/sampler.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using nlohmann::json;
using namespace spread;

#ifndef SPREADGRAPH_VERSION
#define SPREADGRAPH_VERSION "0.0.0"
#endif

int exit_code_for(ErrKind kind) {
  switch (kind) {
    case ErrKind::malformed_input:
    case ErrKind::precondition:
    case ErrKind::length_mismatch:
    case ErrKind::oracle_contract:
    case ErrKind::nondistinct_outputs:
      return 2; // bad request
    case ErrKind::budget_exceeded:
    case ErrKind::scale_exceeded:
    case ErrKind::attempts_exhausted:
      return 1; // well-formed request the run could not satisfy
  }
  return 2;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::int64_t parse_int64(const std::string& s, const char* what) {
  std::int64_t v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw Error(ErrKind::malformed_input, std::string(what) + ": not an integer: " + s);
  return v;
}

// Collects everything the manifest needs while the command runs.
struct RunContext {
  std::string subcommand;
  std::vector<std::string> argv;
  json parameters = json::object();
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> inputs;  // path -> fnv1a digest
  std::map<std::string, std::string> outputs; // path -> fnv1a digest
  std::string first_output;

  std::string read_input(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrKind::malformed_input, "cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    std::string text = ss.str();
    inputs[path] = fnv1a_hex(text);
    return text;
  }

  void write_output(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrKind::malformed_input, "cannot open output file: " + path);
    f << content;
    if (!f) throw Error(ErrKind::malformed_input, "write failed: " + path);
    outputs[path] = fnv1a_hex(content);
    if (first_output.empty()) first_output = path;
  }

  // one manifest per run, next to the first output; no manifest for
  // stdout-only runs
  void finish() {
    if (outputs.empty()) return;
    json m{{"subcommand", subcommand},
           {"argv", argv},
           {"parameters", parameters},
           {"version", SPREADGRAPH_VERSION},
           {"inputs", inputs},
           {"outputs", outputs}};
    if (seed)
      m["seed"] = *seed;
    else
      m["seed"] = nullptr;
    const std::string path = first_output + ".manifest.json";
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << m.dump(2) << "\n";
  }
};

void report_error(const Error& e) {
  json j{{"error", err_kind_name(e.kind())}, {"message", e.what()}};
  if (const auto* b = dynamic_cast<const BudgetExceeded*>(&e)) {
    j["candidate_count"] = b->candidate_count.str();
    j["budget"] = b->budget.str();
  }
  std::cerr << j.dump() << "\n";
}

struct BoundsArgs {
  std::string alpha, k = "1", beta;
  bool non_computable = false;
  bool curve = false;
  int points = 0;
  std::string out;
};

int run_bounds(const BoundsArgs& a, RunContext& ctx) {
  if (a.curve) {
    std::vector<BigInt> ks;
    std::stringstream ss(a.k);
    std::string item;
    while (std::getline(ss, item, ','))
      ks.push_back(BigInt(parse_int64(item, "--k entry")));
    if (ks.empty()) throw Error(ErrKind::malformed_input, "--curve needs --k values");
    if (a.points < 2) throw Error(ErrKind::precondition, "--points must be >= 2");
    const std::string csv = emit_threshold_curves(ks, a.points);
    ctx.parameters = {{"k", a.k}, {"points", a.points}};
    if (a.out.empty())
      std::cout << csv;
    else
      ctx.write_output(a.out, csv);
    ctx.finish();
    return 0;
  }

  if (a.alpha.empty()) throw Error(ErrKind::malformed_input, "--alpha is required");
  const Rat alpha = parse_rat(a.alpha);
  const BigInt k(parse_int64(a.k, "--k"));
  const Rat thr = threshold_beta(alpha, k);
  const Rat beta = a.beta.empty() ? thr : parse_rat(a.beta);

  RateParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.k = k;
  p.computable = !a.non_computable;

  std::cout << rat_str(thr) << "\n";
  std::cout << "lower_slope " << (alpha > 0 ? rat_str(beta / alpha) : "undefined") << "\n";
  std::cout << "upper_slope_total "
            << (alpha < 1 ? rat_str((Rat(1) - beta) / (Rat(1) - alpha) * k) : "undefined")
            << "\n";
  std::cout << "upper_slope_partial " << rat_str(Rat(k) / (Rat(1) + Rat(k - 1) * alpha))
            << "\n";
  p.variant = Variant::total;
  std::cout << "classify_total " << (classify_ext(p) ? "IN" : "OUT") << "\n";
  p.variant = Variant::partial;
  std::cout << "classify_partial " << (classify_ext(p) ? "IN" : "OUT") << "\n";
  return 0;
}

VerifyMode parse_mode(const std::string& s) {
  if (s == "exhaustive") return VerifyMode::exhaustive;
  if (s == "randomized") return VerifyMode::randomized;
  if (s == "attack_assisted") return VerifyMode::attack_assisted;
  throw Error(ErrKind::malformed_input, "unknown mode: " + s);
}

struct ConstructArgs {
  std::int64_t n = 0, D = 0, max_attempts = 1000, trials = 100000;
  int k = 2, d_slack = 2, workers = 0;
  std::string beta, mode = "exhaustive", budget, attack_beta;
  std::int64_t attack_D = 0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> target_edges, cap, bound;
  std::string out, cert_out;
};

VerifyConfig make_verify_config(const std::string& mode, const std::string& budget,
                                std::int64_t trials, std::uint64_t seed, int workers,
                                const std::string& attack_beta, std::int64_t attack_D) {
  VerifyConfig cfg;
  cfg.mode = parse_mode(mode);
  if (!budget.empty()) cfg.budget = BigInt(parse_int64(budget, "--budget"));
  cfg.trials_per_stratum = trials;
  cfg.seed = seed;
  cfg.workers = workers > 0 ? workers
                            : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  if (!attack_beta.empty()) cfg.attack_beta = parse_rat(attack_beta);
  cfg.attack_D = attack_D;
  return cfg;
}

int run_construct(const ConstructArgs& a, RunContext& ctx) {
  SpreadParams params =
      derive_spread_params(a.n, a.k, parse_rat(a.beta), a.D, a.seed, a.d_slack);
  if (a.target_edges) params.target_edges = *a.target_edges;
  if (a.cap) params.subset_cap = *a.cap;
  if (a.bound) params.edge_bound = *a.bound;
  VerifyConfig cfg = make_verify_config(a.mode, a.budget, a.trials, a.seed, a.workers,
                                        a.attack_beta, a.attack_D);
  ctx.parameters = {{"n", a.n},           {"k", a.k},
                    {"beta", a.beta},     {"D", a.D},
                    {"d_slack", a.d_slack}, {"mode", a.mode},
                    {"max_attempts", a.max_attempts}};
  ctx.seed = a.seed;

  auto write_result = [&](const ConstructResult& r) {
    ctx.write_output(a.out, serialize(r.graph));
    if (!a.cert_out.empty()) ctx.write_output(a.cert_out, serialize_certificate(r.cert));
    ctx.finish();
  };

  try {
    ConstructResult r = construct_certified(params, a.max_attempts, cfg);
    write_result(r);
    return 0;
  } catch (const AttemptsExhausted& e) {
    // still write the best candidate: the caller gets a recheckable witness
    write_result(e.best);
    report_error(e);
    return 1;
  }
}

struct VerifyArgs {
  std::string graph;
  std::int64_t cap = 0, bound = 0, trials = 100000, attack_D = 0;
  std::string mode = "exhaustive", budget, attack_beta, out;
  std::uint64_t seed = 0;
  int workers = 0;
};

int run_verify(const VerifyArgs& a, RunContext& ctx) {
  const Hypergraph g = deserialize(ctx.read_input(a.graph));
  VerifyConfig cfg = make_verify_config(a.mode, a.budget, a.trials, a.seed, a.workers,
                                        a.attack_beta, a.attack_D);
  ctx.parameters = {{"cap", a.cap}, {"bound", a.bound}, {"mode", a.mode}};
  ctx.seed = a.seed;
  const SpreadCertificate cert = verify_spread(g, BigInt(a.cap), BigInt(a.bound), cfg);
  const std::string text = serialize_certificate(cert);
  if (a.out.empty())
    std::cout << text;
  else
    ctx.write_output(a.out, text);
  ctx.finish();
  return cert.pass ? 0 : 1;
}

struct AttackArgs {
  std::string graph, beta, out;
  std::int64_t D = 0;
  std::uint64_t seed = 0;
  int bipartition_trials = 64, b_trials = 256, a_trials = 64;
};

int run_attack(const AttackArgs& a, RunContext& ctx) {
  const Hypergraph g = deserialize(ctx.read_input(a.graph));
  AttackConfig cfg;
  cfg.seed = a.seed;
  cfg.max_bipartition_trials = a.bipartition_trials;
  cfg.max_B_trials = a.b_trials;
  cfg.max_A_trials = a.a_trials;
  ctx.parameters = {{"beta", a.beta}, {"D", a.D}};
  ctx.seed = a.seed;
  const AttackResult r = find_dense_subset(g, parse_rat(a.beta), a.D, cfg);
  const std::string text = attack_result_json(r).dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    ctx.write_output(a.out, text);
  ctx.finish();
  return r.achieved ? 0 : 1;
}

struct ExtractArgs {
  std::string to_family, to_graph, out;
  bool distinctify_flag = false;
  std::int64_t trim = 0;
};

int run_extract(const ExtractArgs& a, RunContext& ctx) {
  if (a.to_family.empty() == a.to_graph.empty())
    throw Error(ErrKind::malformed_input, "pass exactly one of --to-family / --to-graph");
  if (!a.to_family.empty()) {
    Hypergraph g = deserialize(ctx.read_input(a.to_family));
    if (a.trim > 0) g = trim_to_edge_count(g, a.trim);
    const std::uint64_t m = g.edges.size();
    if (m == 0 || (m & (m - 1)) != 0)
      throw Error(ErrKind::precondition, "edge count must be a power of two to index rows");
    const int f_n = std::bit_width(m) - 1;
    ctx.parameters = {{"direction", "to-family"}, {"f_n", f_n}};
    const ExtractorFamily fam = family_from_graph(g, f_n);
    ctx.write_output(a.out, serialize_family(to_partial(fam)));
  } else {
    const PartialExtractorFamily pfam = deserialize_family(ctx.read_input(a.to_graph));
    ExtractorFamily fam = to_total(pfam);
    if (a.distinctify_flag) fam = distinctify(fam);
    ctx.parameters = {{"direction", "to-graph"}, {"distinctify", a.distinctify_flag}};
    ctx.write_output(a.out, serialize(graph_from_family(fam)));
  }
  ctx.finish();
  return 0;
}

struct GameArgs {
  std::string graph, strategy = "exhaustive", u, attack_beta, budget, out;
  std::int64_t adv_budget = 0, resp_budget = 0, attack_D = 0;
  std::uint64_t seed = 0;
  int workers = 0;
};

int run_game(const GameArgs& a, RunContext& ctx) {
  const Hypergraph g = deserialize(ctx.read_input(a.graph));
  GameConfig cfg;
  cfg.adversary_budget = a.adv_budget;
  cfg.responder_budget = BigInt(a.resp_budget);
  cfg.attack_D = a.attack_D;
  cfg.seed = a.seed;
  cfg.workers = a.workers > 0
                    ? a.workers
                    : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  if (!a.budget.empty()) cfg.brute_budget = BigInt(parse_int64(a.budget, "--budget"));
  if (a.strategy == "exhaustive") {
    cfg.strategy = Strategy::exhaustive;
  } else if (a.strategy == "greedy") {
    cfg.strategy = Strategy::greedy_attack;
    if (a.attack_beta.empty())
      throw Error(ErrKind::malformed_input, "--strategy greedy needs --attack-beta");
    cfg.attack_beta = parse_rat(a.attack_beta);
  } else if (a.strategy == "explicit") {
    cfg.strategy = Strategy::explicit_set;
    VertexSet u;
    std::stringstream ss(a.u);
    std::string item;
    while (std::getline(ss, item, ','))
      u.push_back(static_cast<std::uint32_t>(parse_int64(item, "--u entry")));
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    cfg.explicit_U = std::move(u);
  } else {
    throw Error(ErrKind::malformed_input, "unknown strategy: " + a.strategy);
  }
  ctx.parameters = {{"adv_budget", a.adv_budget},
                    {"resp_budget", a.resp_budget},
                    {"strategy", a.strategy}};
  ctx.seed = a.seed;

  const GameOutcome out = play(g, cfg);
  json j{{"U", out.U},
         {"forced_count", out.forced_count},
         {"responder_within_budget", out.responder_within_budget},
         {"witness_complete", out.witness_complete},
         {"witness_sigmas", out.witness_sigmas}};
  const std::string text = j.dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    ctx.write_output(a.out, text);
  ctx.finish();
  return out.responder_within_budget ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"spread hypergraph construction, verification, and attack toolkit"};
  app.require_subcommand(1);

  BoundsArgs ba;
  CLI::App* bounds = app.add_subcommand("bounds", "threshold, f-window slopes, classification");
  bounds->add_option("--alpha", ba.alpha, "rate alpha as p/q");
  bounds->add_option("--k", ba.k, "arity (comma list with --curve)");
  bounds->add_option("--beta", ba.beta, "rate beta as p/q (default: the threshold)");
  bounds->add_flag("--non-computable", ba.non_computable,
                   "treat alpha, beta as non-computable for classification");
  bounds->add_flag("--curve", ba.curve, "emit the threshold curve CSV");
  bounds->add_option("--points", ba.points, "grid points for --curve");
  bounds->add_option("-o,--out", ba.out, "write CSV here instead of stdout");

  ConstructArgs ca;
  CLI::App* construct = app.add_subcommand("construct", "sample a certified spread graph");
  construct->add_option("--n", ca.n, "log2 of the vertex count")->required();
  construct->add_option("--k", ca.k, "edge arity")->required();
  construct->add_option("--beta", ca.beta, "rate beta as p/q")->required();
  construct->add_option("--D", ca.D, "probability exponent constant");
  construct->add_option("--seed", ca.seed, "base seed");
  construct->add_option("--d-slack", ca.d_slack, "edge bound slack exponent");
  construct->add_option("--target-edges", ca.target_edges, "override the edge target");
  construct->add_option("--cap", ca.cap, "override the subset cap");
  construct->add_option("--bound", ca.bound, "override the edge bound");
  construct->add_option("--max-attempts", ca.max_attempts, "resampling attempts");
  construct->add_option("--mode", ca.mode, "exhaustive|randomized|attack_assisted");
  construct->add_option("--trials", ca.trials, "randomized-mode trials per stratum");
  construct->add_option("--budget", ca.budget, "brute-force candidate budget")
      ->envname("SPREADGRAPH_BUDGET");
  construct->add_option("--workers", ca.workers, "parallel workers (default: cores)");
  construct->add_option("--attack-beta", ca.attack_beta, "attack beta for attack_assisted");
  construct->add_option("--attack-D", ca.attack_D, "attack D for attack_assisted");
  construct->add_option("-o,--out", ca.out, "output graph file")->required();
  construct->add_option("--cert", ca.cert_out, "output certificate file");

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "certify e(U) < bound for |U| <= cap");
  verify->add_option("graph", va.graph, "input graph file")->required();
  verify->add_option("--cap", va.cap, "subset size cap")->required();
  verify->add_option("--bound", va.bound, "edge bound to certify")->required();
  verify->add_option("--mode", va.mode, "exhaustive|randomized|attack_assisted");
  verify->add_option("--seed", va.seed, "seed for randomized modes");
  verify->add_option("--trials", va.trials, "randomized-mode trials per stratum");
  verify->add_option("--budget", va.budget, "brute-force candidate budget")
      ->envname("SPREADGRAPH_BUDGET");
  verify->add_option("--workers", va.workers, "parallel workers (default: cores)");
  verify->add_option("--attack-beta", va.attack_beta, "attack beta for attack_assisted");
  verify->add_option("--attack-D", va.attack_D, "attack D for attack_assisted");
  verify->add_option("-o,--out", va.out, "write certificate here instead of stdout");

  AttackArgs aa;
  CLI::App* attack = app.add_subcommand("attack", "find a small dense vertex set");
  attack->add_option("graph", aa.graph, "input graph file")->required();
  attack->add_option("--beta", aa.beta, "target rate beta as p/q")->required();
  attack->add_option("--D", aa.D, "density exponent constant");
  attack->add_option("--seed", aa.seed, "base seed");
  attack->add_option("--bipartition-trials", aa.bipartition_trials, "bipartition retries");
  attack->add_option("--b-trials", aa.b_trials, "Case-2 sampling retries");
  attack->add_option("--a-trials", aa.a_trials, "induction A-sampling retries");
  attack->add_option("-o,--out", aa.out, "write the result here instead of stdout");

  ExtractArgs ea;
  CLI::App* extract = app.add_subcommand("extract", "convert graph <-> extractor family");
  extract->add_option("--to-family", ea.to_family, "input graph file");
  extract->add_option("--to-graph", ea.to_graph, "input family file");
  extract->add_flag("--distinctify", ea.distinctify_flag,
                    "remove per-row output collisions before building the graph");
  extract->add_option("--trim", ea.trim,
                      "drop lexicographically largest edges down to this count first");
  extract->add_option("-o,--out", ea.out, "output file")->required();

  GameArgs ga;
  CLI::App* game = app.add_subcommand("game", "play the budgeted description game");
  game->add_option("graph", ga.graph, "input graph file")->required();
  game->add_option("--adv-budget", ga.adv_budget, "adversary set-size budget")->required();
  game->add_option("--resp-budget", ga.resp_budget, "responder enumeration budget")->required();
  game->add_option("--strategy", ga.strategy, "exhaustive|greedy|explicit");
  game->add_option("--u", ga.u, "explicit vertex set, comma separated");
  game->add_option("--attack-beta", ga.attack_beta, "beta for the greedy strategy");
  game->add_option("--attack-D", ga.attack_D, "D for the greedy strategy");
  game->add_option("--budget", ga.budget, "brute-force candidate budget")
      ->envname("SPREADGRAPH_BUDGET");
  game->add_option("--seed", ga.seed, "seed for the greedy strategy");
  game->add_option("--workers", ga.workers, "parallel workers (default: cores)");
  game->add_option("-o,--out", ga.out, "write the outcome here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunContext ctx;
  for (int i = 1; i < argc; ++i) ctx.argv.push_back(argv[i]);

  try {
    if (bounds->parsed()) {
      ctx.subcommand = "bounds";
      return run_bounds(ba, ctx);
    }
    if (construct->parsed()) {
      ctx.subcommand = "construct";
      return run_construct(ca, ctx);
    }
    if (verify->parsed()) {
      ctx.subcommand = "verify";
      return run_verify(va, ctx);
    }
    if (attack->parsed()) {
      ctx.subcommand = "attack";
      return run_attack(aa, ctx);
    }
    if (extract->parsed()) {
      ctx.subcommand = "extract";
      return run_extract(ea, ctx);
    }
    if (game->parsed()) {
      ctx.subcommand = "game";
      return run_game(ga, ctx);
    }
  } catch (const Error& e) {
    report_error(e);
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 2;
}
