#include "katzldp/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "katzldp/errors.hpp"
#include "katzldp/util.hpp"

namespace katzldp {

namespace {

void validate(const ProtocolConfig& cfg) {
  if (cfg.alpha <= 0) throw PreconditionError("attenuation factor must be positive");
  if (cfg.epsilon <= 0) throw PreconditionError("privacy budget must be positive");
  if (cfg.steps < 1) throw PreconditionError("need at least one round");
  if (cfg.clipping && cfg.clip_factor <= 0)
    throw PreconditionError("clip factor must be positive");
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double user_round_step(std::span<const int> own_neighbors,
                       std::span<const double> broadcast_prev, double alpha,
                       double noise_scale, NoiseSource& noise) {
  double sum = 0.0;
  for (int u : own_neighbors) sum += broadcast_prev[u];
  return alpha * sum + laplace_sample(noise, noise_scale);
}

ProtocolRun run_protocol(const Graph& g, const ProtocolConfig& cfg) {
  validate(cfg);
  const int n = g.node_count();

  ProtocolRun run;
  run.config = cfg;
  run.katz_estimate.assign(n, 0.0);
  run.round_vectors.reserve(cfg.steps);
  run.pre_clip_vectors.reserve(cfg.steps);
  run.noise_scales.reserve(cfg.steps);

  if (cfg.clipping) {
    int max_deg = 0;
    for (int v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
    if (cfg.clip_factor > max_deg)
      run.warnings.push_back("clip factor " + format_double(cfg.clip_factor) +
                             " exceeds max degree " + std::to_string(max_deg) +
                             "; clipping will rarely bind");
  }

  std::vector<double> broadcast(n, 1.0);  // K~(0)
  double broadcast_max = 1.0;
  double prev_clip_limit = 1.0;  // (alpha*X)^0
  for (int round = 1; round <= cfg.steps; ++round) {
    // Server side: noise scale from the previous round's reports. With
    // clipping on, the reports are clamped, so the scale can never exceed
    // the deterministic ceiling 2*alpha*S/eps * (alpha*X)^(i-1).
    const double scale =
        round_noise_scale(cfg.alpha, cfg.steps, cfg.epsilon, broadcast_max);
    if (cfg.clipping &&
        scale > round_noise_scale(cfg.alpha, cfg.steps, cfg.epsilon, prev_clip_limit))
      throw std::logic_error("noise scale exceeded the clip-derived ceiling");
    run.noise_scales.push_back(scale);

    const double clip_limit =
        cfg.clipping ? std::pow(cfg.alpha * cfg.clip_factor, round)
                     : std::numeric_limits<double>::infinity();

    // User side: noisy neighbor sum, accumulate, then clamp the report.
    std::vector<double> noisy(n), report(n);
    bool bad = !std::isfinite(scale);
    for (int v = 0; v < n; ++v) {
      NoiseSource ns = NoiseSource::for_user_round(cfg.seed, v, round);
      const double value = user_round_step(g.neighbors(v), broadcast, cfg.alpha,
                                           cfg.noise_free ? 0.0 : scale, ns);
      noisy[v] = value;
      run.katz_estimate[v] += value;
      report[v] = cfg.clipping ? std::clamp(value, -clip_limit, clip_limit) : value;
      if (!std::isfinite(value)) bad = true;
    }
    if (cfg.clipping && !bad) {
      for (int v = 0; v < n; ++v)
        if (std::abs(report[v]) > clip_limit)
          throw std::logic_error("clip ceiling violated");
    }
    run.pre_clip_vectors.push_back(std::move(noisy));
    run.round_vectors.push_back(std::move(report));
    run.completed_rounds = round;
    if (bad) {
      run.diverged = true;
      break;
    }
    broadcast = run.round_vectors.back();
    broadcast_max = max_abs(broadcast);
    prev_clip_limit = clip_limit;
  }
  return run;
}

std::vector<double> run_path_estimation(const Graph& g, const ProtocolConfig& cfg,
                                        int length) {
  if (cfg.alpha != 1.0)
    throw PreconditionError("walk-count estimation requires alpha = 1");
  if (length < 1 || length > cfg.steps)
    throw PreconditionError("length must be in [1, steps]");
  ProtocolRun run = run_protocol(g, cfg);
  if (run.completed_rounds < length)
    throw DivergedError("run diverged before the requested round");
  return run.pre_clip_vectors[length - 1];
}

void write_run_directory(const ProtocolRun& run, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  auto open = [&](const std::string& name) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + name + " in " + dir);
    return out;
  };

  {
    auto out = open("config.txt");
    const ProtocolConfig& c = run.config;
    out << "alpha=" << format_double(c.alpha) << '\n';
    out << "clipping=" << (c.clipping ? "true" : "false") << '\n';
    if (c.clipping) out << "clip=" << format_double(c.clip_factor) << '\n';
    out << "epsilon=" << format_double(c.epsilon) << '\n';
    out << "steps=" << c.steps << '\n';
    out << "seed=" << c.seed << '\n';
    out << "noise-free=" << (c.noise_free ? "true" : "false") << '\n';
    out << "diverged=" << (run.diverged ? "true" : "false") << '\n';
    out << "completed-rounds=" << run.completed_rounds << '\n';
  }

  auto write_vector = [&](const std::string& name, const std::vector<double>& v) {
    auto out = open(name);
    out << "node,value\n";
    for (std::size_t i = 0; i < v.size(); ++i)
      out << i << ',' << format_double(v[i]) << '\n';
  };
  write_vector("katz_estimate.csv", run.katz_estimate);
  char name[64];
  for (int i = 0; i < run.completed_rounds; ++i) {
    std::snprintf(name, sizeof(name), "round_vector_%02d.csv", i + 1);
    write_vector(name, run.round_vectors[i]);
    std::snprintf(name, sizeof(name), "pre_clip_vector_%02d.csv", i + 1);
    write_vector(name, run.pre_clip_vectors[i]);
  }
  {
    auto out = open("noise_scales.csv");
    out << "round,scale\n";
    for (std::size_t i = 0; i < run.noise_scales.size(); ++i)
      out << (i + 1) << ',' << format_double(run.noise_scales[i]) << '\n';
  }
}

}  // namespace katzldp
