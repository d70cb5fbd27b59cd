#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "katzldp/exact.hpp"
#include "katzldp/graph.hpp"
#include "katzldp/protocol.hpp"

namespace katzldp {

/// Aggregated Monte-Carlo statistics of an estimator against its exact
/// reference. Bias is exact - estimate (positive = underestimate); loss is
/// the mean over nodes of variance + bias^2.
struct ExperimentResult {
  int trials = 0;
  int diverged_trials = 0;  // excluded from every moment below
  std::vector<double> per_node_mean;
  std::vector<double> per_node_variance;  // unbiased, divisor trials-1
  double mean_bias = 0.0;
  double mean_variance = 0.0;
  double loss = 0.0;
  /// Mean over nodes of (exact - mean)^2 - variance/trials. The plug-in
  /// squared bias (loss - mean_variance) carries a +variance/trials
  /// estimation offset that swamps small biases at low trial counts; this
  /// removes it (and may go slightly negative when the true bias is ~0).
  double mean_bias2_debiased = 0.0;
  std::map<int, double> recall_at_k;     // mean per-trial top-k recall
  std::map<int, double> recall_se_at_k;  // normal-approximation standard error
  ProtocolConfig config;
  std::uint64_t seed_base = 0;
};

/// Run the protocol with seeds seed..seed+trials-1 and aggregate. Diverged
/// trials are counted and excluded; throws DivergedError if nothing is left.
/// The exact vector must have been computed with the same attenuation factor.
/// Trials execute in parallel; aggregation order is fixed, so results are
/// bit-identical across schedules.
ExperimentResult monte_carlo(const Graph& g, const ProtocolConfig& cfg, int trials,
                             const CentralityVector& exact,
                             std::span<const int> recall_ks = {});

/// Same aggregation for the walk-count estimator at a fixed length
/// (cfg.alpha must be 1; compares against exact length-i counts).
ExperimentResult monte_carlo_paths(const Graph& g, const ProtocolConfig& cfg,
                                   int trials, int length,
                                   const CentralityVector& exact_counts);

/// |top-k(exact) intersect top-k(estimate)| / k, ranking by value descending
/// with ties broken by ascending node id.
double topk_recall(const CentralityVector& exact, std::span<const double> estimate,
                   int k);

/// Which closed-form bound preconditions hold for the given parameters.
struct BoundPreconditions {
  bool alpha_below_bias_pole = false;      // alpha < 1/(phi*X)
  bool steps_per_epsilon_ok = false;       // S/epsilon >= 1
  bool clip_regime_ok = false;             // X^2/D + X <= X^2
  bool alpha_below_variance_pole = false;  // alpha <= 1/(2*sqrt(L))
};

/// The four closed-form error bounds plus the growth base L = max(N*D, X^2).
/// Bounds are reported even when preconditions fail (flags say so); only the
/// Katz variance pole is an error.
struct BoundReport {
  double growth_base = 0.0;  // L
  double path_bias_bound = 0.0;
  double katz_bias_bound = 0.0;
  double path_variance_bound = 0.0;
  double katz_variance_bound = 0.0;
  BoundPreconditions ok;
};

/// Bias of the length-i walk estimator: 2*(phi*X)^(i-1)*D*S/epsilon.
double bound_path_bias(double max_degree, double clip_factor, int steps,
                       double epsilon, int length);

/// Bias of the Katz estimator: (alpha*S/eps)*(1 + 2*alpha*phi*D*X/(1-alpha*phi*X)).
double bound_katz_bias(double alpha, double clip_factor, double max_degree, int steps,
                       double epsilon);

/// Variance of the length-i walk estimator: 32*S^2*(D^2+X^2)*(4L)^(i-2)/eps^2.
double bound_path_variance(double max_degree, double clip_factor, int steps,
                           double epsilon, double heavy_count, int length);

/// Variance of the Katz estimator: 8*S^2*alpha^2*(D^2+X^2)/(L*eps^2*(1-2*alpha*sqrt(L))^2).
/// Throws PreconditionError at or beyond the pole 1 - 2*alpha*sqrt(L) <= 0.
double bound_katz_variance(double alpha, double max_degree, double clip_factor,
                           double heavy_count, int steps, double epsilon);

BoundReport make_bound_report(double max_degree, double clip_factor,
                              double heavy_count, double alpha, int steps,
                              double epsilon, int length);

/// Feasible (d, N) for an externally chosen clip factor, minimizing the
/// growth base L (ties: smaller d). nullopt when no threshold satisfies
/// N*X + D*d <= X^2 for this X.
std::optional<ClippingParams> regime_params_for_clip(const DegreeProfile& profile,
                                                     double clip_factor);

/// Expected noise-scale sequence of the UNclipped protocol on the edgeless
/// n-node graph: E[N_1] = 2*alpha*S/eps, E[N_{i+1}] = (2*alpha*S/eps)*H_n*E[N_i].
std::vector<double> noclip_noise_growth(long long n, double alpha, int steps,
                                        double epsilon);

/// Outcome of the statistical edge-LDP check.
struct RatioCheckReport {
  bool passed = false;
  double epsilon_round = 0.0;
  double max_log_ratio = 0.0;  // over all qualifying bins
  int bins_checked = 0;
  // Worst offending bin when failed (threshold = epsilon_round + slack there).
  int worst_bin = -1;
  double worst_bin_low = 0.0;
  double worst_bin_high = 0.0;
  double worst_threshold = 0.0;
  std::string message;
};

/// Empirical likelihood-ratio test of the single-round user mechanism on two
/// adjacency rows differing in one bit (worst case: the extra neighbor
/// carries the maximal broadcast value, shifting the neighbor sum by the
/// sensitivity). Histograms both output distributions over shared bins of
/// width scale/10 spanning +/-10*scale and requires the empirical ratio to
/// stay within exp(epsilon_round) plus binomial slack on every bin with at
/// least 100 expected counts.
///
/// scale_override (debug/negative control) replaces the calibrated scale
/// sensitivity/epsilon_round; center_shift < 0 means "use the sensitivity",
/// 0 replays identical rows.
RatioCheckReport privacy_ratio_check(double epsilon_round, double sensitivity,
                                     long long samples, std::uint64_t seed = 1,
                                     double scale_override = 0.0,
                                     double center_shift = -1.0);

/// Fixed column order:
/// trials,diverged,mean_bias,mean_variance,loss[,recall_<k>,recall_se_<k>...]
void write_experiment_csv(const ExperimentResult& r, std::ostream& out);
/// Fixed column order: node,mean,variance
void write_experiment_per_node_csv(const ExperimentResult& r, std::ostream& out);
/// Fixed column order: L,path_bias,katz_bias,path_variance,katz_variance,
/// alpha_below_bias_pole,steps_per_epsilon_ok,clip_regime_ok,alpha_below_variance_pole
void write_bound_report_csv(const BoundReport& b, std::ostream& out);

}  // namespace katzldp
