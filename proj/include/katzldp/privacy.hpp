#pragma once

#include <cstdint>

namespace katzldp {

/// Seedable counter-based uniform stream. Identical seed gives a bit-identical
/// sample sequence; a source is single-owner and never shared across threads.
/// Independent per-user streams are derived with for_user_round so that
/// parallel execution cannot reorder draws.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : seed_(seed) {}

  /// Child stream for one (node, round) cell of a protocol execution.
  static NoiseSource for_user_round(std::uint64_t master_seed, std::uint64_t node,
                                    std::uint64_t round);

  /// Uniform draw strictly inside (0,1); advances the position by one.
  double next_uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
};

/// One draw from the zero-centered Laplace distribution via the inverse CDF of
/// a single uniform: sign(u-1/2) * scale * ln(1 - 2|u-1/2|). Scale 0 returns
/// exactly 0. Always consumes exactly one uniform from the stream.
double laplace_sample(NoiseSource& ns, double scale);

/// Per-round Laplace scale of the protocol: 2*alpha*steps*prev_round_max/epsilon.
double round_noise_scale(double alpha, int steps, double epsilon, double prev_round_max);

/// Privacy budget split for an S-round run: each round's report is
/// (epsilon/2S)-edge LDP, hence (epsilon/S)-edge RDP, composing to epsilon.
struct BudgetLedger {
  double total_epsilon = 0.0;
  int rounds = 0;
  double per_round_ldp = 0.0;
  double per_round_rdp = 0.0;
};

BudgetLedger make_ledger(double epsilon, int rounds);

/// H_n by direct summation (smallest terms first).
double harmonic_number(long long n);

/// Expected maximum of n independent |Laplace(scale)| draws: scale * H_n.
double expected_max_abs_laplace(long long n, double scale);

}  // namespace katzldp
