#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* kBin = KATZLDP_BIN;

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("katzldp_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  fs::path file(const std::string& name) const { return dir / name; }
};

int run(const std::string& args, const fs::path& stdout_to = {}) {
  std::string cmd = std::string(kBin) + " " + args;
  if (!stdout_to.empty())
    cmd += " > " + stdout_to.string();
  else
    cmd += " > /dev/null";
  cmd += " 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string value_of(const std::string& report, const std::string& key) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  return "";
}

}  // namespace

TEST_CASE("inspect reports graph statistics") {
  Workspace ws;
  write_file(ws.file("path.txt"), "0 1\n1 2\n");
  const fs::path report = ws.file("inspect.out");
  REQUIRE(run("inspect --graph " + ws.file("path.txt").string(), report) == 0);
  const std::string text = slurp(report);
  CHECK(value_of(text, "nodes") == "3");
  CHECK(value_of(text, "edges") == "2");
  CHECK(value_of(text, "max_degree") == "2");
  const double lambda = std::stod(value_of(text, "lambda_max"));
  CHECK(std::abs(lambda - 1.4142135623730951) < 1e-4);
}

TEST_CASE("estimate is reproducible and replays from its manifest") {
  Workspace ws;
  write_file(ws.file("g.txt"), "0 1\n1 2\n2 3\n3 0\n0 2\n");
  const std::string graph = ws.file("g.txt").string();
  const std::string args =
      " --graph " + graph + " --alpha 0.2 --clip 3 --epsilon 1 --steps 4 --seed 77";

  REQUIRE(run("estimate" + args + " --out " + ws.file("a").string()) == 0);
  REQUIRE(run("estimate" + args + " --out " + ws.file("b").string()) == 0);
  for (const char* name :
       {"katz_estimate.csv", "round_vector_04.csv", "pre_clip_vector_02.csv",
        "noise_scales.csv", "config.txt"}) {
    CHECK(slurp(ws.file("a") / name) == slurp(ws.file("b") / name));
  }
  // Manifests may differ only in their out= line.
  {
    std::istringstream ma(slurp(ws.file("a") / "manifest.txt"));
    std::istringstream mb(slurp(ws.file("b") / "manifest.txt"));
    std::string la, lb;
    while (std::getline(ma, la) && std::getline(mb, lb))
      if (la.rfind("out=", 0) != 0) CHECK(la == lb);
  }

  // Replay purely from the manifest.
  REQUIRE(run("estimate --config " + (ws.file("a") / "manifest.txt").string() +
              " --out " + ws.file("c").string()) == 0);
  for (const char* name :
       {"katz_estimate.csv", "round_vector_04.csv", "noise_scales.csv"}) {
    CHECK(slurp(ws.file("a") / name) == slurp(ws.file("c") / name));
  }

  // Flags take precedence over the config file.
  REQUIRE(run("estimate --config " + (ws.file("a") / "manifest.txt").string() +
              " --seed 78 --out " + ws.file("d").string()) == 0);
  CHECK(slurp(ws.file("a") / "katz_estimate.csv") !=
        slurp(ws.file("d") / "katz_estimate.csv"));
}

TEST_CASE("alpha-frac resolves against the measured spectral radius") {
  Workspace ws;
  write_file(ws.file("tri.txt"), "0 1\n1 2\n2 0\n");  // lambda = 2
  const std::string graph = ws.file("tri.txt").string();
  REQUIRE(run("exact --graph " + graph + " --alpha-frac 0.85 --steps 40 --out " +
              ws.file("frac").string()) == 0);
  REQUIRE(run("exact --graph " + graph + " --alpha 0.425 --steps 40 --out " +
              ws.file("abs").string()) == 0);
  const std::string a = slurp(ws.file("frac") / "katz.csv");
  const std::string b = slurp(ws.file("abs") / "katz.csv");
  CHECK(!a.empty());
  // lambda estimate is 2 +/- tol, so values agree to the tolerance, not bytes.
  std::istringstream ia(a), ib(b);
  std::string la, lb;
  std::getline(ia, la), std::getline(ib, lb);  // header
  while (std::getline(ia, la) && std::getline(ib, lb)) {
    const double va = std::stod(la.substr(la.find(',') + 1));
    const double vb = std::stod(lb.substr(lb.find(',') + 1));
    CHECK(std::abs(va - vb) < 1e-3 * (1.0 + std::abs(vb)));
  }
}

TEST_CASE("clip-factor sweeps emit the same grid") {
  Workspace ws;
  write_file(ws.file("g.txt"), "0 1\n1 2\n2 3\n3 0\n");
  REQUIRE(run("sweep --graph " + ws.file("g.txt").string() +
              " --sweep-clip 1..4:3 --steps 2 --trials 8 --topk 1 --seed 6 --out " +
              ws.file("cw").string()) == 0);
  const std::string csv = slurp(ws.file("cw") / "sweep.csv");
  long long rows = -1;
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 3 * 2 * (5 + 1));
  CHECK(csv.find("clip,2.5,") != std::string::npos);  // midpoint of 1..4:3
}

TEST_CASE("noise-free estimate equals the exact command output") {
  Workspace ws;
  write_file(ws.file("g.txt"), "0 1\n1 2\n2 0\n0 3\n");
  const std::string graph = ws.file("g.txt").string();
  REQUIRE(run("exact --graph " + graph + " --alpha 0.2 --steps 6 --out " +
              ws.file("exact").string()) == 0);
  REQUIRE(run("estimate --graph " + graph +
              " --alpha 0.2 --clip 100 --steps 6 --seed 1 --noise-free --out " +
              ws.file("est").string()) == 0);
  CHECK(slurp(ws.file("exact") / "katz.csv") ==
        slurp(ws.file("est") / "katz_estimate.csv"));
}

TEST_CASE("exit codes distinguish failure classes") {
  Workspace ws;
  write_file(ws.file("bad.txt"), "0 1\nnot numbers\n");
  CHECK(run("inspect --graph " + ws.file("bad.txt").string()) == 2);

  write_file(ws.file("missing.txt"), "");  // empty input is a parse error
  CHECK(run("inspect --graph " + ws.file("missing.txt").string()) == 2);

  write_file(ws.file("g.txt"), "0 1\n1 2\n");
  // Sweep without a range is a precondition error.
  CHECK(run("sweep --graph " + ws.file("g.txt").string() + " --trials 5 --out " +
            ws.file("s").string()) == 3);

  // An absurd budget diverges: exit 4 but the trace is still written.
  CHECK(run("estimate --graph " + ws.file("g.txt").string() +
            " --alpha 1 --no-clip --epsilon 1e-300 --steps 4 --seed 3 --out " +
            ws.file("div").string()) == 4);
  CHECK(fs::exists(ws.file("div") / "katz_estimate.csv"));

}

TEST_CASE("bounds past the variance pole report infinity with a false flag") {
  Workspace ws;
  const fs::path report = ws.file("pole.out");
  REQUIRE(run("bounds --max-degree 100 --clip 20 --heavy-count 2 --alpha 0.05",
              report) == 0);
  const std::string text = slurp(report);
  CHECK(value_of(text, "katz_variance_bound") == "inf");
  CHECK(value_of(text, "alpha_below_variance_pole") == "false");
}

TEST_CASE("solve guard suggests the iterative path") {
  Workspace ws;
  std::ostringstream big;
  for (int v = 0; v + 1 < 2001; ++v) big << v << ' ' << v + 1 << '\n';
  write_file(ws.file("big.txt"), big.str());
  CHECK(run("exact --graph " + ws.file("big.txt").string() + " --alpha 0.1 --solve --out " +
            ws.file("x").string()) == 3);
}

TEST_CASE("sweep emits the documented row grid") {
  Workspace ws;
  write_file(ws.file("g.txt"), "0 1\n1 2\n");
  REQUIRE(run("sweep --graph " + ws.file("g.txt").string() +
              " --sweep-steps 1..2 --trials 10 --topk 1,2 --seed 5 --out " +
              ws.file("sw").string()) == 0);
  const std::string csv = slurp(ws.file("sw") / "sweep.csv");
  long long rows = -1;  // header
  for (char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == 2 * 2 * (5 + 2));
  CHECK(csv.rfind("sweep_param,sweep_value,variant,metric,value,stderr,bound,bound_ok",
                  0) == 0);
  CHECK(csv.find("clipped,loss") != std::string::npos);
  CHECK(csv.find("clipped,bias2_debiased") != std::string::npos);
  CHECK(csv.find("unclipped,recall_2") != std::string::npos);
  CHECK(fs::exists(ws.file("sw") / "manifest.txt"));
}

TEST_CASE("bounds command prints the report and replays from its manifest") {
  Workspace ws;
  const fs::path report = ws.file("bounds.out");
  REQUIRE(run("bounds --max-degree 100 --clip 10 --heavy-count 0 --alpha 0.01 "
              "--steps 5 --epsilon 1 --length 2 --out " +
                  ws.file("b").string(),
              report) == 0);
  const std::string text = slurp(report);
  const double path_bias = std::stod(value_of(text, "path_bias_bound"));
  CHECK(std::abs(path_bias - 16180.339887498949) < 1e-6);
  CHECK(value_of(text, "alpha_below_bias_pole") == "true");
  CHECK(fs::exists(ws.file("b") / "bounds.csv"));

  REQUIRE(run("bounds --config " + (ws.file("b") / "manifest.txt").string() +
              " --out " + ws.file("b2").string()) == 0);
  CHECK(slurp(ws.file("b") / "bounds.csv") == slurp(ws.file("b2") / "bounds.csv"));

  CHECK(run("bounds --clip 10 --alpha 0.01") == 3);  // max-degree missing
}
