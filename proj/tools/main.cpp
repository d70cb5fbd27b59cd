// katzldp: edge-LDP estimation of walk counts and Katz centrality.
//
// Subcommands: inspect | exact | estimate | sweep | bounds. Every command
// that writes output also writes a manifest.txt with all defaults resolved;
// feeding that file back through --config reproduces the run bit-exactly.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "katzldp/analysis.hpp"
#include "katzldp/errors.hpp"
#include "katzldp/exact.hpp"
#include "katzldp/graph.hpp"
#include "katzldp/manifest.hpp"
#include "katzldp/privacy.hpp"
#include "katzldp/protocol.hpp"
#include "katzldp/util.hpp"

namespace fs = std::filesystem;
using namespace katzldp;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitDiverged = 4;

using ConfigMap = std::map<std::string, std::string>;

// Flag > config file > fallback.
double pick_double(const std::optional<double>& cli, const ConfigMap& cfg,
                   const std::string& key, double fallback) {
  if (cli) return *cli;
  if (auto it = cfg.find(key); it != cfg.end()) {
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw ParseError("config key " + key + ": not a number: " + it->second);
    }
  }
  return fallback;
}

long long pick_int(const std::optional<long long>& cli, const ConfigMap& cfg,
                   const std::string& key, long long fallback) {
  if (cli) return *cli;
  if (auto it = cfg.find(key); it != cfg.end()) {
    try {
      return std::stoll(it->second);
    } catch (const std::exception&) {
      throw ParseError("config key " + key + ": not an integer: " + it->second);
    }
  }
  return fallback;
}

std::uint64_t pick_u64(const std::optional<std::uint64_t>& cli, const ConfigMap& cfg,
                       const std::string& key, std::uint64_t fallback) {
  if (cli) return *cli;
  if (auto it = cfg.find(key); it != cfg.end()) {
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw ParseError("config key " + key + ": not an integer: " + it->second);
    }
  }
  return fallback;
}

std::string pick_string(const std::optional<std::string>& cli, const ConfigMap& cfg,
                        const std::string& key, const std::string& fallback) {
  if (cli) return *cli;
  if (auto it = cfg.find(key); it != cfg.end()) return it->second;
  return fallback;
}

bool pick_flag(bool cli, const ConfigMap& cfg, const std::string& key) {
  if (cli) return true;
  if (auto it = cfg.find(key); it != cfg.end()) return it->second == "true";
  return false;
}

ConfigMap load_config(const std::optional<std::string>& path) {
  if (!path) return {};
  return read_key_value_path(*path);
}

struct GraphBundle {
  Graph graph;
  LoadStats stats;
  DegreeProfile profile;
  std::uint64_t digest = 0;
  std::string path;
  double lambda = 0.0;  // filled on demand
};

GraphBundle load_graph(const std::string& path) {
  LoadStats stats;
  Graph g = load_edge_list_file(path, &stats);
  GraphBundle b{std::move(g), stats, {}, fnv1a64_file(path), path, 0.0};
  b.profile = degree_profile(b.graph);
  std::cerr << "loaded " << path << ": " << b.graph.node_count() << " nodes, "
            << b.graph.edge_count() << " edges; " << stats.one_way_edges
            << " edges were listed in one direction only and symmetrized\n";
  return b;
}

double lambda_of(GraphBundle& b) {
  if (b.lambda == 0.0) b.lambda = max_eigenvalue(b.graph);
  return b.lambda;
}

// Shared option block: the protocol parameters plus their resolution rules.
struct ProtocolArgs {
  std::optional<double> alpha, alpha_frac, clip, epsilon;
  std::optional<long long> steps;
  std::optional<std::uint64_t> seed;
  bool no_clip = false;
  bool noise_free = false;

  void add_common(CLI::App* cmd, bool with_noise_free) {
    cmd->add_option("--alpha", alpha, "attenuation factor");
    cmd->add_option("--alpha-frac", alpha_frac,
                    "attenuation factor as a fraction of 1/lambda_max")
        ->excludes("--alpha");
    cmd->add_option("--clip", clip, "clip factor X (default: lambda_max)");
    cmd->add_flag("--no-clip", no_clip, "disable clipping")->excludes("--clip");
    cmd->add_option("--epsilon", epsilon, "total privacy budget (default 1)");
    cmd->add_option("--steps", steps, "number of protocol rounds S");
    cmd->add_option("--seed", seed, "64-bit master seed");
    if (with_noise_free)
      cmd->add_flag("--noise-free", noise_free,
                    "debug: zero noise, output NOT private");
  }

  // Materialize a full ProtocolConfig; lambda-dependent defaults use the graph.
  ProtocolConfig resolve(const ConfigMap& cfg, GraphBundle& g, int default_steps) {
    ProtocolConfig pc;
    if (alpha) {
      pc.alpha = *alpha;
    } else if (alpha_frac) {
      pc.alpha = *alpha_frac / lambda_of(g);
    } else if (auto it = cfg.find("alpha"); it != cfg.end()) {
      pc.alpha = std::stod(it->second);
    } else if (auto it2 = cfg.find("alpha-frac"); it2 != cfg.end()) {
      pc.alpha = std::stod(it2->second) / lambda_of(g);
    } else {
      pc.alpha = 0.85 / lambda_of(g);
    }
    if (no_clip) {
      pc.clipping = false;
    } else if (clip) {
      pc.clipping = true;
      pc.clip_factor = *clip;
    } else if (cfg.count("no-clip") && cfg.at("no-clip") == "true") {
      pc.clipping = false;
    } else if (auto it = cfg.find("clip"); it != cfg.end()) {
      pc.clipping = true;
      pc.clip_factor = std::stod(it->second);
    } else {
      pc.clipping = true;
      pc.clip_factor = lambda_of(g);
    }
    pc.epsilon = pick_double(epsilon, cfg, "epsilon", 1.0);
    pc.steps = static_cast<int>(pick_int(steps, cfg, "steps", default_steps));
    pc.seed = pick_u64(seed, cfg, "seed", 1);
    pc.noise_free = pick_flag(noise_free, cfg, "noise-free");
    return pc;
  }
};

void manifest_protocol(RunManifest& m, const ProtocolConfig& pc) {
  m.set("alpha", pc.alpha);
  if (pc.clipping)
    m.set("clip", pc.clip_factor);
  else
    m.set_flag("no-clip", true);
  m.set("epsilon", pc.epsilon);
  m.set("steps", pc.steps);
  m.set("seed", pc.seed);
  if (pc.noise_free) m.set_flag("noise-free", true);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<int> parse_topk(const std::string& spec) {
  std::vector<int> ks;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    ks.push_back(std::stoi(item));
  }
  if (ks.empty()) throw ParseError("empty top-k list: " + spec);
  return ks;
}

// "A..B" inclusive integer range.
std::pair<int, int> parse_step_range(const std::string& spec) {
  const auto dots = spec.find("..");
  if (dots == std::string::npos)
    throw ParseError("expected A..B in sweep range: " + spec);
  const int a = std::stoi(spec.substr(0, dots));
  const int b = std::stoi(spec.substr(dots + 2));
  if (a < 1 || b < a) throw ParseError("bad sweep range: " + spec);
  return {a, b};
}

// "A..B:N" linear grid of N clip factors.
std::vector<double> parse_clip_range(const std::string& spec) {
  const auto dots = spec.find("..");
  const auto colon = spec.find(':', dots == std::string::npos ? 0 : dots);
  if (dots == std::string::npos || colon == std::string::npos)
    throw ParseError("expected A..B:N in clip sweep: " + spec);
  const double a = std::stod(spec.substr(0, dots));
  const double b = std::stod(spec.substr(dots + 2, colon - dots - 2));
  const int n = std::stoi(spec.substr(colon + 1));
  if (n < 1 || a <= 0 || b < a) throw ParseError("bad clip sweep: " + spec);
  std::vector<double> xs;
  if (n == 1) {
    xs.push_back(a);
  } else {
    for (int i = 0; i < n; ++i)
      xs.push_back(a + (b - a) * static_cast<double>(i) / (n - 1));
  }
  return xs;
}

// ---------------------------------------------------------------- inspect --

int cmd_inspect(const std::string& graph_path, const std::optional<std::string>& out_dir) {
  GraphBundle g = load_graph(graph_path);
  const double lambda = lambda_of(g);
  const ClippingParams cp = select_clipping_params(g.profile);

  std::ostringstream report;
  report << "nodes=" << g.graph.node_count() << '\n';
  report << "edges=" << g.graph.edge_count() << '\n';
  report << "avg_degree=" << format_double(g.profile.avg_degree) << '\n';
  report << "max_degree=" << g.profile.max_degree << '\n';
  report << "one_way_edges=" << g.stats.one_way_edges << '\n';
  report << "lambda_max=" << format_double(lambda) << '\n';
  report << "clip_factor=" << format_double(cp.clip_factor) << '\n';
  report << "degree_threshold=" << cp.degree_threshold << '\n';
  report << "heavy_count=" << cp.heavy_count << '\n';
  std::cout << report.str();

  if (out_dir) {
    fs::create_directories(*out_dir);
    open_out(fs::path(*out_dir) / "inspect.txt") << report.str();
    RunManifest m("inspect", g.digest);
    m.set("graph", graph_path);
    m.set("out", *out_dir);
    m.write_file((fs::path(*out_dir) / "manifest.txt").string());
  }
  return 0;
}

// ------------------------------------------------------------------ exact --

int cmd_exact(const std::string& graph_path, ProtocolArgs& args, bool solve,
              const ConfigMap& cfg, const std::string& out_dir) {
  GraphBundle g = load_graph(graph_path);
  const bool use_solve = solve || (cfg.count("solve") && cfg.at("solve") == "true");
  ProtocolConfig pc = args.resolve(cfg, g, 100);
  const double lambda = lambda_of(g);
  if (pc.alpha >= 1.0 / lambda)
    std::cerr << "warning: alpha " << format_double(pc.alpha)
              << " is at or above 1/lambda_max = " << format_double(1.0 / lambda)
              << "; the Katz series does not converge\n";

  CentralityVector result;
  if (use_solve) {
    if (g.graph.node_count() > 2000)
      throw PreconditionError(
          "--solve is limited to 2000 nodes; use --steps for larger graphs");
    result = exact_katz_solve(g.graph, pc.alpha);
  } else {
    result = exact_katz_iterative(g.graph, pc.alpha, pc.steps);
  }

  fs::create_directories(out_dir);
  auto out = open_out(fs::path(out_dir) / "katz.csv");
  write_centrality_csv(result, out);

  RunManifest m("exact", g.digest);
  m.set("graph", graph_path);
  m.set("alpha", pc.alpha);
  if (use_solve)
    m.set_flag("solve", true);
  else
    m.set("steps", pc.steps);
  m.set("out", out_dir);
  m.write_file((fs::path(out_dir) / "manifest.txt").string());
  std::cout << "wrote " << (fs::path(out_dir) / "katz.csv").string() << '\n';
  return 0;
}

// --------------------------------------------------------------- estimate --

int cmd_estimate(const std::string& graph_path, ProtocolArgs& args,
                 const ConfigMap& cfg, const std::string& out_dir) {
  GraphBundle g = load_graph(graph_path);
  ProtocolConfig pc = args.resolve(cfg, g, 5);
  if (pc.noise_free)
    std::cerr << "warning: --noise-free produces NON-PRIVATE output; "
                 "debug use only\n";

  ProtocolRun run = run_protocol(g.graph, pc);
  for (const std::string& w : run.warnings) std::cerr << "warning: " << w << '\n';

  write_run_directory(run, out_dir);
  RunManifest m("estimate", g.digest);
  m.set("graph", graph_path);
  manifest_protocol(m, pc);
  m.set("out", out_dir);
  m.write_file((fs::path(out_dir) / "manifest.txt").string());

  std::cout << "completed " << run.completed_rounds << "/" << pc.steps
            << " rounds" << (run.diverged ? " (diverged)" : "") << "; trace in "
            << out_dir << '\n';
  return run.diverged ? kExitDiverged : 0;
}

// ------------------------------------------------------------------ sweep --

struct SweepPoint {
  std::string param;
  double value = 0.0;
  ProtocolConfig config;
};

int cmd_sweep(const std::string& graph_path, ProtocolArgs& args,
              const std::optional<std::string>& sweep_steps,
              const std::optional<std::string>& sweep_clip,
              std::optional<long long> trials_opt,
              const std::optional<std::string>& topk_opt, const ConfigMap& cfg,
              const std::string& out_dir) {
  GraphBundle g = load_graph(graph_path);
  ProtocolConfig base = args.resolve(cfg, g, 5);
  const int trials = static_cast<int>(pick_int(trials_opt, cfg, "trials", 100));
  if (trials < 2) throw PreconditionError("sweep needs at least two trials");
  const std::string topk_spec = pick_string(topk_opt, cfg, "topk", "10,100");
  std::vector<int> ks = parse_topk(topk_spec);
  for (int k : ks)
    if (k > g.graph.node_count())
      throw PreconditionError("top-k " + std::to_string(k) +
                              " exceeds node count");

  const std::string steps_spec = pick_string(sweep_steps, cfg, "sweep-steps", "");
  const std::string clip_spec = pick_string(sweep_clip, cfg, "sweep-clip", "");
  if (steps_spec.empty() == clip_spec.empty())
    throw PreconditionError("exactly one of --sweep-steps / --sweep-clip required");

  std::vector<SweepPoint> points;
  if (!steps_spec.empty()) {
    auto [a, b] = parse_step_range(steps_spec);
    for (int s = a; s <= b; ++s) {
      SweepPoint p{"steps", static_cast<double>(s), base};
      p.config.steps = s;
      points.push_back(p);
    }
  } else {
    for (double x : parse_clip_range(clip_spec)) {
      SweepPoint p{"clip", x, base};
      p.config.clip_factor = x;
      points.push_back(p);
    }
  }

  // One exact reference for the whole sweep, truncated far past measurable.
  const double lambda = lambda_of(g);
  const int s_true = katz_truncation_steps(base.alpha, lambda);
  const CentralityVector exact = exact_katz_iterative(g.graph, base.alpha, s_true);

  fs::create_directories(out_dir);
  auto out = open_out(fs::path(out_dir) / "sweep.csv");
  out << "sweep_param,sweep_value,variant,metric,value,stderr,bound,bound_ok\n";
  long long rows = 0;

  const int metrics_per_variant = 5 + static_cast<int>(ks.size());
  for (const SweepPoint& point : points) {
    for (const bool clipped : {true, false}) {
      ProtocolConfig pc = point.config;
      pc.clipping = clipped;
      std::cerr << "sweep " << point.param << "=" << format_double(point.value)
                << (clipped ? " clipped" : " unclipped") << "...\n";

      // Bounds annotate the clipped estimator only.
      std::string var_bound, var_ok, bias_bound, bias_ok;
      if (clipped) {
        auto regime = regime_params_for_clip(g.profile, pc.clip_factor);
        const double heavy =
            regime ? static_cast<double>(regime->heavy_count) : 0.0;
        const double kb = bound_katz_bias(pc.alpha, pc.clip_factor,
                                          g.profile.max_degree, pc.steps, pc.epsilon);
        bias_bound = format_double(kb * kb);
        const double L = std::max(heavy * g.profile.max_degree,
                                  pc.clip_factor * pc.clip_factor);
        const double phi = 1.6180339887498949;
        const bool bias_flags = regime.has_value() &&
                                pc.alpha < 1.0 / (phi * pc.clip_factor) &&
                                pc.steps / pc.epsilon >= 1.0;
        bias_ok = bias_flags ? "true" : "false";
        try {
          var_bound = format_double(bound_katz_variance(
              pc.alpha, g.profile.max_degree, pc.clip_factor, heavy, pc.steps,
              pc.epsilon));
          var_ok = (regime.has_value() && pc.alpha <= 1.0 / (2.0 * std::sqrt(L)))
                       ? "true"
                       : "false";
        } catch (const PreconditionError&) {
          var_bound.clear();
          var_ok = "false";
        }
      }

      auto emit = [&](const std::string& metric, const std::string& value,
                      const std::string& se, const std::string& bound,
                      const std::string& bound_ok) {
        out << point.param << ',' << format_double(point.value) << ','
            << (clipped ? "clipped" : "unclipped") << ',' << metric << ','
            << value << ',' << se << ',' << bound << ',' << bound_ok << '\n';
        ++rows;
      };

      try {
        ExperimentResult r = monte_carlo(g.graph, pc, trials, exact, ks);
        const double bias2 = r.loss - r.mean_variance;
        emit("loss", format_double(r.loss), "", "", "");
        emit("variance", format_double(r.mean_variance), "",
             clipped ? var_bound : "", clipped ? var_ok : "");
        emit("bias2", format_double(bias2), "", clipped ? bias_bound : "",
             clipped ? bias_ok : "");
        emit("bias2_debiased", format_double(r.mean_bias2_debiased), "", "", "");
        emit("diverged", std::to_string(r.diverged_trials), "", "", "");
        for (int k : ks)
          emit("recall_" + std::to_string(k), format_double(r.recall_at_k[k]),
               format_double(r.recall_se_at_k[k]), "", "");
      } catch (const DivergedError&) {
        emit("loss", "nan", "", "", "");
        emit("variance", "nan", "", "", "");
        emit("bias2", "nan", "", "", "");
        emit("bias2_debiased", "nan", "", "", "");
        emit("diverged", std::to_string(trials), "", "", "");
        for (int k : ks) emit("recall_" + std::to_string(k), "nan", "", "", "");
      }
    }
  }

  const long long expected_rows =
      static_cast<long long>(points.size()) * 2 * metrics_per_variant;
  if (rows != expected_rows)
    throw std::logic_error("sweep row count mismatch: " + std::to_string(rows) +
                           " vs " + std::to_string(expected_rows));

  RunManifest m("sweep", g.digest);
  m.set("graph", graph_path);
  manifest_protocol(m, base);
  if (!steps_spec.empty())
    m.set("sweep-steps", steps_spec);
  else
    m.set("sweep-clip", clip_spec);
  m.set("trials", static_cast<long long>(trials));
  m.set("topk", topk_spec);
  m.set("out", out_dir);
  m.write_file((fs::path(out_dir) / "manifest.txt").string());
  std::cout << "wrote " << rows << " rows to "
            << (fs::path(out_dir) / "sweep.csv").string() << '\n';
  return 0;
}

// ----------------------------------------------------------------- bounds --

struct BoundArgs {
  std::optional<double> max_degree, clip, heavy, alpha, epsilon;
  std::optional<long long> steps, length;
};

int cmd_bounds(const BoundArgs& args, const ConfigMap& cfg,
               const std::optional<std::string>& out_opt) {
  const double max_degree = pick_double(args.max_degree, cfg, "max-degree", 0.0);
  const double clip = pick_double(args.clip, cfg, "clip", 0.0);
  const double heavy = pick_double(args.heavy, cfg, "heavy-count", 0.0);
  const double alpha = pick_double(args.alpha, cfg, "alpha", 0.0);
  const double epsilon = pick_double(args.epsilon, cfg, "epsilon", 1.0);
  const long long steps = pick_int(args.steps, cfg, "steps", 5);
  const long long length = pick_int(args.length, cfg, "length", 2);
  if (max_degree <= 0) throw PreconditionError("--max-degree is required and positive");
  if (clip <= 0) throw PreconditionError("--clip is required and positive");
  if (alpha <= 0) throw PreconditionError("--alpha is required and positive");
  std::optional<std::string> out_dir = out_opt;
  if (!out_dir && cfg.count("out")) out_dir = cfg.at("out");

  BoundReport report = make_bound_report(max_degree, clip, heavy, alpha,
                                         static_cast<int>(steps), epsilon,
                                         static_cast<int>(length));
  std::ostringstream text;
  text << "L=" << format_double(report.growth_base) << '\n'
       << "path_bias_bound=" << format_double(report.path_bias_bound) << '\n'
       << "katz_bias_bound=" << format_double(report.katz_bias_bound) << '\n'
       << "path_variance_bound=" << format_double(report.path_variance_bound) << '\n'
       << "katz_variance_bound=" << format_double(report.katz_variance_bound) << '\n'
       << "alpha_below_bias_pole=" << (report.ok.alpha_below_bias_pole ? "true" : "false") << '\n'
       << "steps_per_epsilon_ok=" << (report.ok.steps_per_epsilon_ok ? "true" : "false") << '\n'
       << "clip_regime_ok=" << (report.ok.clip_regime_ok ? "true" : "false") << '\n'
       << "alpha_below_variance_pole=" << (report.ok.alpha_below_variance_pole ? "true" : "false") << '\n';
  std::cout << text.str();

  if (out_dir) {
    fs::create_directories(*out_dir);
    auto out = open_out(fs::path(*out_dir) / "bounds.csv");
    write_bound_report_csv(report, out);
    RunManifest m("bounds", 0);
    m.set("max-degree", max_degree);
    m.set("clip", clip);
    m.set("heavy-count", heavy);
    m.set("alpha", alpha);
    m.set("steps", steps);
    m.set("epsilon", epsilon);
    m.set("length", length);
    m.set("out", *out_dir);
    m.write_file((fs::path(*out_dir) / "manifest.txt").string());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"edge-LDP walk-count and Katz centrality estimation"};
  app.require_subcommand(1);

  // inspect
  auto* inspect = app.add_subcommand("inspect", "graph statistics and clipping parameters");
  std::optional<std::string> in_graph, in_out, in_config;
  inspect->add_option("--graph", in_graph, "edge-list file");
  inspect->add_option("--out", in_out, "output directory");
  inspect->add_option("--config", in_config, "key=value config file");

  // exact
  auto* exact = app.add_subcommand("exact", "exact Katz centrality (no privacy)");
  std::optional<std::string> ex_graph, ex_out, ex_config;
  ProtocolArgs ex_args;
  bool ex_solve = false;
  exact->add_option("--graph", ex_graph, "edge-list file");
  ex_args.add_common(exact, false);
  exact->add_flag("--solve", ex_solve, "dense linear solve instead of iteration");
  exact->add_option("--out", ex_out, "output directory");
  exact->add_option("--config", ex_config, "key=value config file");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "one private protocol run");
  std::optional<std::string> es_graph, es_out, es_config;
  ProtocolArgs es_args;
  estimate->add_option("--graph", es_graph, "edge-list file");
  es_args.add_common(estimate, true);
  estimate->add_option("--out", es_out, "output directory");
  estimate->add_option("--config", es_config, "key=value config file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo parameter sweep");
  std::optional<std::string> sw_graph, sw_out, sw_config, sw_steps, sw_clip, sw_topk;
  std::optional<long long> sw_trials;
  ProtocolArgs sw_args;
  sweep->add_option("--graph", sw_graph, "edge-list file");
  sw_args.add_common(sweep, false);
  sweep->add_option("--sweep-steps", sw_steps, "A..B inclusive round sweep");
  sweep->add_option("--sweep-clip", sw_clip, "A..B:N clip factor sweep");
  sweep->add_option("--trials", sw_trials, "Monte-Carlo trials per point (default 100)");
  sweep->add_option("--topk", sw_topk, "comma separated recall cutoffs (default 10,100)");
  sweep->add_option("--out", sw_out, "output directory");
  sweep->add_option("--config", sw_config, "key=value config file");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "closed-form error bounds");
  std::optional<std::string> bo_out, bo_config;
  BoundArgs bo;
  bounds->add_option("--max-degree", bo.max_degree, "max degree D");
  bounds->add_option("--clip", bo.clip, "clip factor X");
  bounds->add_option("--heavy-count", bo.heavy, "nodes above the degree threshold");
  bounds->add_option("--alpha", bo.alpha, "attenuation factor");
  bounds->add_option("--steps", bo.steps, "rounds S (default 5)");
  bounds->add_option("--epsilon", bo.epsilon, "privacy budget (default 1)");
  bounds->add_option("--length", bo.length, "walk length i for the path bounds");
  bounds->add_option("--out", bo_out, "output directory");
  bounds->add_option("--config", bo_config, "key=value config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (inspect->parsed()) {
      ConfigMap cfg = load_config(in_config);
      const std::string graph = pick_string(in_graph, cfg, "graph", "");
      if (graph.empty()) throw PreconditionError("--graph is required");
      std::optional<std::string> out = in_out;
      if (!out && cfg.count("out")) out = cfg.at("out");
      return cmd_inspect(graph, out);
    }
    if (exact->parsed()) {
      ConfigMap cfg = load_config(ex_config);
      const std::string graph = pick_string(ex_graph, cfg, "graph", "");
      if (graph.empty()) throw PreconditionError("--graph is required");
      const std::string out = pick_string(ex_out, cfg, "out", "");
      if (out.empty()) throw PreconditionError("--out is required");
      return cmd_exact(graph, ex_args, ex_solve, cfg, out);
    }
    if (estimate->parsed()) {
      ConfigMap cfg = load_config(es_config);
      const std::string graph = pick_string(es_graph, cfg, "graph", "");
      if (graph.empty()) throw PreconditionError("--graph is required");
      const std::string out = pick_string(es_out, cfg, "out", "");
      if (out.empty()) throw PreconditionError("--out is required");
      return cmd_estimate(graph, es_args, cfg, out);
    }
    if (sweep->parsed()) {
      ConfigMap cfg = load_config(sw_config);
      const std::string graph = pick_string(sw_graph, cfg, "graph", "");
      if (graph.empty()) throw PreconditionError("--graph is required");
      const std::string out = pick_string(sw_out, cfg, "out", "");
      if (out.empty()) throw PreconditionError("--out is required");
      return cmd_sweep(graph, sw_args, sw_steps, sw_clip, sw_trials, sw_topk, cfg, out);
    }
    if (bounds->parsed()) return cmd_bounds(bo, load_config(bo_config), bo_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what()
              << " (last estimate " << format_double(e.last_estimate()) << ")\n";
    return kExitPrecondition;
  } catch (const DivergedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
