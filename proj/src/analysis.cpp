#include "katzldp/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <thread>

#include "katzldp/errors.hpp"
#include "katzldp/util.hpp"

namespace katzldp {

namespace {

// Per-block moment accumulator (Welford / Chan combine). Blocks are merged in
// index order, so the aggregate is independent of thread scheduling.
struct MomentBlock {
  long long count = 0;
  int diverged = 0;
  std::vector<double> mean, m2;
  std::vector<double> recall_sum, recall_sumsq;  // parallel to the k list

  void init(int n, int ks) {
    mean.assign(n, 0.0);
    m2.assign(n, 0.0);
    recall_sum.assign(ks, 0.0);
    recall_sumsq.assign(ks, 0.0);
  }

  void add(const std::vector<double>& sample) {
    ++count;
    for (std::size_t v = 0; v < sample.size(); ++v) {
      const double delta = sample[v] - mean[v];
      mean[v] += delta / static_cast<double>(count);
      m2[v] += delta * (sample[v] - mean[v]);
    }
  }

  void merge(const MomentBlock& o) {
    if (o.count == 0) {
      diverged += o.diverged;
      return;
    }
    if (count == 0) {
      const int d = diverged;
      *this = o;
      diverged += d;
      return;
    }
    const double na = static_cast<double>(count), nb = static_cast<double>(o.count);
    for (std::size_t v = 0; v < mean.size(); ++v) {
      const double delta = o.mean[v] - mean[v];
      mean[v] += delta * nb / (na + nb);
      m2[v] += o.m2[v] + delta * delta * na * nb / (na + nb);
    }
    for (std::size_t j = 0; j < recall_sum.size(); ++j) {
      recall_sum[j] += o.recall_sum[j];
      recall_sumsq[j] += o.recall_sumsq[j];
    }
    count += o.count;
    diverged += o.diverged;
  }
};

std::vector<int> topk_ids(std::span<const double> values, int k) {
  std::vector<int> ids(values.size());
  std::iota(ids.begin(), ids.end(), 0);
  auto better = [&](int a, int b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  };
  std::partial_sort(ids.begin(), ids.begin() + k, ids.end(), better);
  ids.resize(k);
  return ids;
}

// One Monte-Carlo aggregation loop; `estimate` maps a finished run to the
// vector whose moments we want (Katz estimate or a fixed-length walk vector).
ExperimentResult aggregate_runs(
    const Graph& g, const ProtocolConfig& cfg, int trials,
    const CentralityVector& exact, std::span<const int> recall_ks,
    const std::function<const std::vector<double>*(const ProtocolRun&)>& estimate) {
  if (trials < 2) throw PreconditionError("need at least two trials");
  const int n = g.node_count();
  if (static_cast<int>(exact.values.size()) != n)
    throw PreconditionError("exact reference has wrong length");
  for (int k : recall_ks)
    if (k < 1 || k > n) throw PreconditionError("recall k out of range");

  std::vector<std::vector<char>> exact_top(recall_ks.size());
  for (std::size_t j = 0; j < recall_ks.size(); ++j) {
    exact_top[j].assign(n, 0);
    for (int id : topk_ids(exact.values, recall_ks[j])) exact_top[j][id] = 1;
  }

  constexpr int kBlock = 64;
  const int blocks = (trials + kBlock - 1) / kBlock;
  std::vector<MomentBlock> partial(blocks);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= blocks) return;
      MomentBlock& acc = partial[b];
      acc.init(n, static_cast<int>(recall_ks.size()));
      const int lo = b * kBlock, hi = std::min(trials, lo + kBlock);
      for (int t = lo; t < hi; ++t) {
        ProtocolConfig trial_cfg = cfg;
        trial_cfg.seed = cfg.seed + static_cast<std::uint64_t>(t);
        ProtocolRun run = run_protocol(g, trial_cfg);
        const std::vector<double>* value = estimate(run);
        if (run.diverged || value == nullptr) {
          ++acc.diverged;
          continue;
        }
        acc.add(*value);
        for (std::size_t j = 0; j < recall_ks.size(); ++j) {
          int hits = 0;
          for (int id : topk_ids(*value, recall_ks[j])) hits += exact_top[j][id];
          const double r = static_cast<double>(hits) / recall_ks[j];
          acc.recall_sum[j] += r;
          acc.recall_sumsq[j] += r * r;
        }
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned nthreads = std::min<unsigned>(hw, static_cast<unsigned>(blocks));
  std::vector<std::future<void>> pool;
  for (unsigned i = 1; i < nthreads; ++i)
    pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();

  MomentBlock total;
  total.init(n, static_cast<int>(recall_ks.size()));
  for (const MomentBlock& p : partial) total.merge(p);

  if (total.count < 2)
    throw DivergedError("all trials diverged; no statistics available");

  ExperimentResult result;
  result.trials = trials;
  result.diverged_trials = total.diverged;
  result.config = cfg;
  result.seed_base = cfg.seed;
  result.per_node_mean = total.mean;
  result.per_node_variance.resize(n);
  const double valid = static_cast<double>(total.count);
  double bias_acc = 0.0, var_acc = 0.0, loss_acc = 0.0, debiased_acc = 0.0;
  for (int v = 0; v < n; ++v) {
    result.per_node_variance[v] = total.m2[v] / (valid - 1.0);
    const double bias = exact.values[v] - total.mean[v];
    bias_acc += bias;
    var_acc += result.per_node_variance[v];
    loss_acc += result.per_node_variance[v] + bias * bias;
    debiased_acc += bias * bias - result.per_node_variance[v] / valid;
  }
  result.mean_bias = bias_acc / n;
  result.mean_variance = var_acc / n;
  result.loss = loss_acc / n;
  result.mean_bias2_debiased = debiased_acc / n;
  for (std::size_t j = 0; j < recall_ks.size(); ++j) {
    const double mean = total.recall_sum[j] / valid;
    const double var =
        (total.recall_sumsq[j] - valid * mean * mean) / (valid - 1.0);
    result.recall_at_k[recall_ks[j]] = mean;
    result.recall_se_at_k[recall_ks[j]] = std::sqrt(std::max(0.0, var) / valid);
  }
  return result;
}

}  // namespace

ExperimentResult monte_carlo(const Graph& g, const ProtocolConfig& cfg, int trials,
                             const CentralityVector& exact,
                             std::span<const int> recall_ks) {
  if (exact.alpha != cfg.alpha)
    throw PreconditionError("exact reference was computed with a different alpha");
  return aggregate_runs(g, cfg, trials, exact, recall_ks,
                        [](const ProtocolRun& run) { return &run.katz_estimate; });
}

ExperimentResult monte_carlo_paths(const Graph& g, const ProtocolConfig& cfg,
                                   int trials, int length,
                                   const CentralityVector& exact_counts) {
  if (cfg.alpha != 1.0)
    throw PreconditionError("walk-count experiments require alpha = 1");
  if (length < 1 || length > cfg.steps)
    throw PreconditionError("length must be in [1, steps]");
  return aggregate_runs(
      g, cfg, trials, exact_counts, {},
      [length](const ProtocolRun& run) -> const std::vector<double>* {
        if (run.completed_rounds < length) return nullptr;
        return &run.pre_clip_vectors[length - 1];
      });
}

double topk_recall(const CentralityVector& exact, std::span<const double> estimate,
                   int k) {
  const int n = static_cast<int>(exact.values.size());
  if (static_cast<int>(estimate.size()) != n)
    throw PreconditionError("estimate has wrong length");
  if (k < 1 || k > n) throw PreconditionError("k must be in [1, n]");
  std::vector<char> in_exact(n, 0);
  for (int id : topk_ids(exact.values, k)) in_exact[id] = 1;
  int hits = 0;
  for (int id : topk_ids(estimate, k)) hits += in_exact[id];
  return static_cast<double>(hits) / k;
}

double bound_path_bias(double max_degree, double clip_factor, int steps,
                       double epsilon, int length) {
  if (length < 1 || steps < 1 || epsilon <= 0 || clip_factor <= 0 || max_degree <= 0)
    throw PreconditionError("bound arguments must be positive");
  const double phi = std::numbers::phi;
  return 2.0 * std::pow(phi * clip_factor, length - 1) * max_degree * steps / epsilon;
}

double bound_katz_bias(double alpha, double clip_factor, double max_degree, int steps,
                       double epsilon) {
  if (alpha <= 0 || steps < 1 || epsilon <= 0 || clip_factor <= 0 || max_degree <= 0)
    throw PreconditionError("bound arguments must be positive");
  const double phi = std::numbers::phi;
  return (alpha * steps / epsilon) *
         (1.0 + 2.0 * alpha * phi * max_degree * clip_factor /
                    (1.0 - alpha * phi * clip_factor));
}

double bound_path_variance(double max_degree, double clip_factor, int steps,
                           double epsilon, double heavy_count, int length) {
  if (length < 1 || steps < 1 || epsilon <= 0 || clip_factor <= 0 || max_degree <= 0)
    throw PreconditionError("bound arguments must be positive");
  if (heavy_count < 0) throw PreconditionError("heavy count must be nonnegative");
  const double L =
      std::max(heavy_count * max_degree, clip_factor * clip_factor);
  return 32.0 * steps * steps * (max_degree * max_degree + clip_factor * clip_factor) *
         std::pow(4.0 * L, length - 2) / (epsilon * epsilon);
}

double bound_katz_variance(double alpha, double max_degree, double clip_factor,
                           double heavy_count, int steps, double epsilon) {
  if (alpha <= 0 || steps < 1 || epsilon <= 0 || clip_factor <= 0 || max_degree <= 0)
    throw PreconditionError("bound arguments must be positive");
  if (heavy_count < 0) throw PreconditionError("heavy count must be nonnegative");
  const double L =
      std::max(heavy_count * max_degree, clip_factor * clip_factor);
  const double margin = 1.0 - 2.0 * alpha * std::sqrt(L);
  if (margin <= 0)
    throw PreconditionError(
        "katz variance bound undefined: alpha >= 1/(2*sqrt(L))");
  return 8.0 * steps * steps * alpha * alpha *
         (max_degree * max_degree + clip_factor * clip_factor) /
         (L * epsilon * epsilon * margin * margin);
}

BoundReport make_bound_report(double max_degree, double clip_factor,
                              double heavy_count, double alpha, int steps,
                              double epsilon, int length) {
  const double phi = std::numbers::phi;
  BoundReport report;
  report.growth_base =
      std::max(heavy_count * max_degree, clip_factor * clip_factor);
  report.path_bias_bound =
      bound_path_bias(max_degree, clip_factor, steps, epsilon, length);
  report.katz_bias_bound =
      bound_katz_bias(alpha, clip_factor, max_degree, steps, epsilon);
  report.path_variance_bound =
      bound_path_variance(max_degree, clip_factor, steps, epsilon, heavy_count, length);
  // Past the pole the formula is meaningless; the report marks it instead of
  // refusing, so boundary parameters still print with their flags.
  try {
    report.katz_variance_bound =
        bound_katz_variance(alpha, max_degree, clip_factor, heavy_count, steps, epsilon);
  } catch (const PreconditionError&) {
    report.katz_variance_bound = std::numeric_limits<double>::infinity();
  }
  report.ok.alpha_below_bias_pole = alpha < 1.0 / (phi * clip_factor);
  report.ok.steps_per_epsilon_ok = steps / epsilon >= 1.0;
  report.ok.clip_regime_ok =
      clip_factor * clip_factor / max_degree + clip_factor <=
      clip_factor * clip_factor;
  report.ok.alpha_below_variance_pole =
      alpha <= 1.0 / (2.0 * std::sqrt(report.growth_base));
  return report;
}

std::optional<ClippingParams> regime_params_for_clip(const DegreeProfile& profile,
                                                     double clip_factor) {
  const double D = profile.max_degree;
  const double x2 = clip_factor * clip_factor;
  std::optional<ClippingParams> best;
  double best_l = 0.0;
  for (int d = 0; d <= profile.max_degree; ++d) {
    const double heavy = static_cast<double>(profile.count_above(d));
    if (heavy * clip_factor + D * d > x2) continue;
    const double l = std::max(heavy * D, x2);
    if (!best || l < best_l) {
      best = ClippingParams{clip_factor, d, static_cast<long long>(heavy)};
      best_l = l;
    }
  }
  return best;
}

std::vector<double> noclip_noise_growth(long long n, double alpha, int steps,
                                        double epsilon) {
  if (n < 1) throw PreconditionError("need at least one node");
  if (alpha <= 0 || steps < 1 || epsilon <= 0)
    throw PreconditionError("growth sequence needs positive alpha, steps, epsilon");
  const double base = 2.0 * alpha * steps / epsilon;
  const double h = harmonic_number(n);
  std::vector<double> expected(steps);
  expected[0] = base;
  for (int i = 1; i < steps; ++i) expected[i] = expected[i - 1] * base * h;
  return expected;
}

RatioCheckReport privacy_ratio_check(double epsilon_round, double sensitivity,
                                     long long samples, std::uint64_t seed,
                                     double scale_override, double center_shift) {
  if (epsilon_round <= 0) throw PreconditionError("per-round epsilon must be positive");
  if (sensitivity < 0) throw PreconditionError("sensitivity must be nonnegative");
  if (samples < 1000) throw PreconditionError("need at least 1000 samples");

  RatioCheckReport report;
  report.epsilon_round = epsilon_round;
  if (sensitivity == 0.0) {
    report.passed = true;
    report.message = "degenerate: zero sensitivity, identical point outputs";
    return report;
  }

  const double calibrated = sensitivity / epsilon_round;
  const double scale = scale_override > 0 ? scale_override : calibrated;
  const double shift = center_shift < 0 ? sensitivity : center_shift;

  // The two neighboring rows: with and without the one extra neighbor whose
  // broadcast value makes the line-9 sums differ by `shift`.
  const std::vector<double> broadcast = {shift};
  const std::vector<int> row_without = {};
  const std::vector<int> row_with = {0};

  const double lo = -10.0 * calibrated, width = calibrated / 10.0;
  const int nbins = 200;
  std::vector<long long> count_a(nbins, 0), count_b(nbins, 0);
  NoiseSource ns(seed);
  for (long long s = 0; s < samples; ++s) {
    const double a = user_round_step(row_without, broadcast, 1.0, scale, ns);
    const double b = user_round_step(row_with, broadcast, 1.0, scale, ns);
    const int ba = static_cast<int>(std::floor((a - lo) / width));
    const int bb = static_cast<int>(std::floor((b - lo) / width));
    if (ba >= 0 && ba < nbins) ++count_a[ba];
    if (bb >= 0 && bb < nbins) ++count_b[bb];
  }

  // Expected per-bin counts under the actual sampling distributions, used
  // only to qualify bins with enough mass for a stable ratio.
  auto laplace_cdf = [](double x, double center, double b) {
    const double t = x - center;
    return t < 0 ? 0.5 * std::exp(t / b) : 1.0 - 0.5 * std::exp(-t / b);
  };
  report.passed = true;
  for (int bin = 0; bin < nbins; ++bin) {
    const double bl = lo + bin * width, bh = bl + width;
    const double ea =
        samples * (laplace_cdf(bh, 0.0, scale) - laplace_cdf(bl, 0.0, scale));
    const double eb =
        samples * (laplace_cdf(bh, shift, scale) - laplace_cdf(bl, shift, scale));
    if (ea < 100.0 || eb < 100.0) continue;
    ++report.bins_checked;
    double log_ratio;
    if (count_a[bin] == 0 || count_b[bin] == 0) {
      log_ratio = std::numeric_limits<double>::infinity();
    } else {
      log_ratio = std::abs(std::log(static_cast<double>(count_a[bin])) -
                           std::log(static_cast<double>(count_b[bin])));
    }
    const double slack = 3.0 * (1.0 / std::sqrt(ea) + 1.0 / std::sqrt(eb));
    report.max_log_ratio = std::max(report.max_log_ratio, log_ratio);
    if (log_ratio > epsilon_round + slack && report.passed) {
      report.passed = false;
      report.worst_bin = bin;
      report.worst_bin_low = bl;
      report.worst_bin_high = bh;
      report.worst_threshold = epsilon_round + slack;
      report.message = "bin [" + format_double(bl) + "," + format_double(bh) +
                       "): log-ratio " + format_double(log_ratio) +
                       " exceeds " + format_double(epsilon_round + slack);
    }
  }
  if (report.passed)
    report.message = "max log-ratio " + format_double(report.max_log_ratio) +
                     " within exp(" + format_double(epsilon_round) + ") bound";
  return report;
}

void write_experiment_csv(const ExperimentResult& r, std::ostream& out) {
  out << "trials,diverged,mean_bias,mean_variance,loss,bias2_debiased";
  for (const auto& [k, v] : r.recall_at_k)
    out << ",recall_" << k << ",recall_se_" << k;
  out << '\n';
  out << r.trials << ',' << r.diverged_trials << ',' << format_double(r.mean_bias)
      << ',' << format_double(r.mean_variance) << ',' << format_double(r.loss)
      << ',' << format_double(r.mean_bias2_debiased);
  for (const auto& [k, v] : r.recall_at_k)
    out << ',' << format_double(v) << ',' << format_double(r.recall_se_at_k.at(k));
  out << '\n';
}

void write_experiment_per_node_csv(const ExperimentResult& r, std::ostream& out) {
  out << "node,mean,variance\n";
  for (std::size_t v = 0; v < r.per_node_mean.size(); ++v)
    out << v << ',' << format_double(r.per_node_mean[v]) << ','
        << format_double(r.per_node_variance[v]) << '\n';
}

void write_bound_report_csv(const BoundReport& b, std::ostream& out) {
  out << "L,path_bias,katz_bias,path_variance,katz_variance,"
         "alpha_below_bias_pole,steps_per_epsilon_ok,clip_regime_ok,"
         "alpha_below_variance_pole\n";
  out << format_double(b.growth_base) << ',' << format_double(b.path_bias_bound)
      << ',' << format_double(b.katz_bias_bound) << ','
      << format_double(b.path_variance_bound) << ','
      << format_double(b.katz_variance_bound) << ','
      << (b.ok.alpha_below_bias_pole ? "true" : "false") << ','
      << (b.ok.steps_per_epsilon_ok ? "true" : "false") << ','
      << (b.ok.clip_regime_ok ? "true" : "false") << ','
      << (b.ok.alpha_below_variance_pole ? "true" : "false") << '\n';
}

}  // namespace katzldp
