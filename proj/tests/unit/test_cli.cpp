#include "spread/hypergraph.hpp"

#include <doctest.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

// each test runs the installed binary in its own scratch directory
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("spreadgraph-test-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  fs::path operator/(const std::string& name) const { return dir / name; }
};

int run_cli(const Scratch& s, const std::string& args) {
  const std::string cmd = "cd " + s.dir.string() + " && " SPREADGRAPH_CLI_PATH " " +
                          args + " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

// same digest the manifest writer uses
std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace

TEST_CASE("bounds prints the threshold first") {
  Scratch s;
  CHECK(run_cli(s, "bounds --alpha 1/2 --k 2") == 0);
  CHECK(first_line(slurp(s / "stdout.txt")) == "2/3");

  CHECK(run_cli(s, "bounds --alpha 1 --k 7") == 0);
  CHECK(first_line(slurp(s / "stdout.txt")) == "1");

  CHECK(run_cli(s, "bounds --alpha 1/2 --k 2 --beta 2/3") == 0);
  const std::string out = slurp(s / "stdout.txt");
  CHECK(out.find("classify_total OUT") != std::string::npos);
  CHECK(out.find("classify_partial IN") != std::string::npos);
}

TEST_CASE("malformed rationals exit 2 with a structured error") {
  Scratch s;
  CHECK(run_cli(s, "bounds --alpha 1/0 --k 2") == 2);
  const std::string err = slurp(s / "stderr.txt");
  CHECK(err.find("\"error\"") != std::string::npos);
  CHECK(err.find("malformed-input") != std::string::npos);

  CHECK(run_cli(s, "bounds --alpha 0.5 --k 2") == 2);
  CHECK(run_cli(s, "nonsense") == 2);
  CHECK(run_cli(s, "bounds --no-such-flag") == 2);
  CHECK(run_cli(s, "") == 2); // a subcommand is required
  CHECK(run_cli(s, "--help") == 0);
}

TEST_CASE("curve CSV rows and manifest digests") {
  Scratch s;
  CHECK(run_cli(s, "bounds --curve --k 1,2,5,10,100 --points 101 -o curve.csv") == 0);
  const std::string csv = slurp(s / "curve.csv");
  std::int64_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 506); // header + 5 * 101 rows

  const std::string mtext = slurp(s / "curve.csv.manifest.json");
  REQUIRE_FALSE(mtext.empty());
  CHECK(mtext.find("\"subcommand\": \"bounds\"") != std::string::npos);
  CHECK(mtext.find("curve.csv") != std::string::npos);
  CHECK(mtext.find(fnv1a_hex(csv)) != std::string::npos);
  CHECK(mtext.find("timestamp") == std::string::npos);
}

TEST_CASE("stdout-only runs leave no files behind") {
  Scratch s;
  CHECK(run_cli(s, "bounds --alpha 1/3 --k 3") == 0);
  std::int64_t entries = 0;
  for (const auto& ent : fs::directory_iterator(s.dir)) {
    (void)ent;
    ++entries;
  }
  CHECK(entries == 2); // just the redirection files
}

TEST_CASE("construct, verify, attack, game pipeline") {
  Scratch s;
  CHECK(run_cli(s, "construct --n 4 --k 2 --beta 1/2 --seed 7 -o g.json --cert c.json") == 0);
  REQUIRE(fs::exists(s / "g.json"));
  REQUIRE(fs::exists(s / "c.json"));
  CHECK(fs::exists(s / "g.json.manifest.json"));

  CHECK(run_cli(s, "verify g.json --cap 4 --bound 16 --mode exhaustive") == 0);
  // a bound of zero cannot pass on a non-empty graph
  CHECK(run_cli(s, "verify g.json --cap 4 --bound 0 --mode exhaustive") == 1);

  CHECK(run_cli(s, "attack g.json --beta 1/2 --D 0 -o atk.json") == 0);
  const std::string atk = slurp(s / "atk.json");
  CHECK(atk.find("\"achieved\": true") != std::string::npos);

  CHECK(run_cli(s, "game g.json --adv-budget 0 --resp-budget 0") == 0);
  CHECK(run_cli(s, "game g.json --adv-budget 4 --resp-budget 0") == 1);
  CHECK(run_cli(s, "game g.json --adv-budget 4 --resp-budget 15") == 0);
}

TEST_CASE("attack on an empty graph exits 1") {
  Scratch s;
  {
    spread::Hypergraph g;
    g.n_vertices = 8;
    g.k = 2;
    g.kind = spread::EdgeKind::distinct_set;
    std::ofstream out(s / "empty.json", std::ios::binary);
    out << spread::serialize(g);
  }
  CHECK(run_cli(s, "attack empty.json --beta 1/2 --D 0 -o res.json") == 1);
  const std::string res = slurp(s / "res.json");
  CHECK(res.find("\"achieved\": false") != std::string::npos);
}

TEST_CASE("identical seeds give byte-identical outputs") {
  Scratch a, b;
  const std::string args =
      "construct --n 4 --k 2 --beta 1/2 --seed 3 -o g.json --cert c.json";
  CHECK(run_cli(a, args) == 0);
  CHECK(run_cli(b, args) == 0);
  CHECK(slurp(a / "g.json") == slurp(b / "g.json"));
  CHECK(slurp(a / "c.json") == slurp(b / "c.json"));
  CHECK(slurp(a / "g.json.manifest.json") == slurp(b / "g.json.manifest.json"));

  // worker count must not affect the certificate
  CHECK(run_cli(a, "verify g.json --cap 4 --bound 16 --workers 1 -o c1.json") == 0);
  CHECK(run_cli(a, "verify g.json --cap 4 --bound 16 --workers 4 -o c4.json") == 0);
  CHECK(slurp(a / "c1.json") == slurp(a / "c4.json"));
}

TEST_CASE("SPREADGRAPH_BUDGET caps the exhaustive scan") {
  Scratch s;
  CHECK(run_cli(s, "construct --n 4 --k 2 --beta 1/2 --seed 7 -o g.json") == 0);
  const std::string cmd = "cd " + s.dir.string() +
                          " && SPREADGRAPH_BUDGET=3 " SPREADGRAPH_CLI_PATH
                          " verify g.json --cap 4 --bound 16 > o.txt 2> e.txt";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 1);
  CHECK(slurp(s / "e.txt").find("budget-exceeded") != std::string::npos);
}

TEST_CASE("extract round trip through the CLI") {
  Scratch s;
  CHECK(run_cli(s, "construct --n 4 --k 2 --beta 1/2 --seed 7 -o g.json") == 0);
  CHECK(run_cli(s, "extract --to-family g.json --trim 16 -o fam.json") == 0);
  const std::string fam = slurp(s / "fam.json");
  CHECK(fam.find("\"f_n\": 4") != std::string::npos);
  CHECK(run_cli(s, "extract --to-graph fam.json -o g2.json") == 0);
  CHECK(fs::exists(s / "g2.json"));
  // converting back to a family reproduces the file byte for byte
  CHECK(run_cli(s, "extract --to-family g2.json -o fam2.json") == 0);
  CHECK(slurp(s / "fam2.json") == fam);

  CHECK(run_cli(s, "extract --to-family g.json --to-graph fam.json -o x.json") == 2);
  CHECK(run_cli(s, "extract -o x.json") == 2);
}
