#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "katzldp/graph.hpp"
#include "katzldp/privacy.hpp"

namespace katzldp {

/// Everything one protocol execution consumes.
struct ProtocolConfig {
  double alpha = 1.0;        // attenuation factor (1 = walk counting mode)
  double clip_factor = 1.0;  // X; round i reports are clamped to +/-(alpha*X)^i
  double epsilon = 1.0;      // total privacy budget
  int steps = 1;             // S
  bool clipping = true;      // off reproduces the no-clipping baseline
  std::uint64_t seed = 0;

  /// Debug only: replaces every Laplace draw by 0 so runs can be compared
  /// against the exact oracle. Output is NOT private in this mode; the
  /// experiment commands do not expose it.
  bool noise_free = false;
};

/// Full trace of one simulated S-round execution.
///
/// Round i (1-based) lives at index i-1. pre_clip_vectors holds the noisy
/// user values that get accumulated into katz_estimate; round_vectors holds
/// what was actually reported back to the server (clamped when clipping is
/// on, identical otherwise). noise_scales[i-1] is the scale the server
/// broadcast for round i, computed from the previous round's reports
/// (all-ones for round 1).
struct ProtocolRun {
  std::vector<double> katz_estimate;
  std::vector<std::vector<double>> round_vectors;
  std::vector<std::vector<double>> pre_clip_vectors;
  std::vector<double> noise_scales;
  ProtocolConfig config;

  bool diverged = false;   // a non-finite value appeared; trace is partial
  int completed_rounds = 0;
  std::vector<std::string> warnings;
};

/// One user's computation for one round. The interface is the privacy
/// boundary: a user sees its own adjacency row, the broadcast previous-round
/// vector, the broadcast noise scale, and its private noise stream - nothing
/// else. Returns the noisy value before any clamping.
double user_round_step(std::span<const int> own_neighbors,
                       std::span<const double> broadcast_prev, double alpha,
                       double noise_scale, NoiseSource& noise);

/// Simulate the full protocol: per round the server broadcasts the noise
/// scale and previous reports, every user computes its noisy neighbor sum,
/// accumulates it into its running centrality estimate, clamps if clipping is
/// enabled, and reports back. Deterministic given (g, cfg). Runs that hit
/// non-finite values are marked diverged and return the partial trace.
ProtocolRun run_protocol(const Graph& g, const ProtocolConfig& cfg);

/// Walk-count estimator: with alpha = 1 the round-i pre-clip vector estimates
/// the number of length-i walks. Requires cfg.alpha == 1 and 1 <= length <=
/// cfg.steps.
std::vector<double> run_path_estimation(const Graph& g, const ProtocolConfig& cfg,
                                        int length);

/// Serialize a run into a directory: config.txt (key=value), the final
/// estimate and every round vector as node,value CSV, and noise_scales.csv.
void write_run_directory(const ProtocolRun& run, const std::string& dir);

}  // namespace katzldp
