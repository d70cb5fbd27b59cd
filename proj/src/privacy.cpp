#include "katzldp/privacy.hpp"

#include <cmath>

#include "katzldp/errors.hpp"
#include "katzldp/util.hpp"

namespace katzldp {

NoiseSource NoiseSource::for_user_round(std::uint64_t master_seed, std::uint64_t node,
                                        std::uint64_t round) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ (node + 0x9e3779b97f4a7c15ULL));
  s = splitmix64(s ^ (round + 0xd1b54a32d192ed03ULL));
  return NoiseSource(s);
}

double NoiseSource::next_uniform() {
  ++position_;
  const std::uint64_t z = splitmix64(seed_ + 0x9e3779b97f4a7c15ULL * position_);
  // 53 mantissa bits, offset by half a step: strictly inside (0,1).
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

double laplace_sample(NoiseSource& ns, double scale) {
  if (scale < 0) throw PreconditionError("noise scale must be nonnegative");
  const double u = ns.next_uniform();  // consumed even for scale 0
  if (scale == 0.0) return 0.0;
  const double t = u - 0.5;
  const double sign = t < 0 ? -1.0 : 1.0;
  return sign * scale * std::log(1.0 - 2.0 * std::abs(t));
}

double round_noise_scale(double alpha, int steps, double epsilon,
                         double prev_round_max) {
  if (alpha <= 0 || steps < 1 || epsilon <= 0)
    throw PreconditionError("noise scale needs positive alpha, steps and epsilon");
  if (prev_round_max < 0)
    throw PreconditionError("previous-round maximum is a magnitude, must be >= 0");
  return 2.0 * alpha * steps * prev_round_max / epsilon;
}

BudgetLedger make_ledger(double epsilon, int rounds) {
  if (epsilon <= 0) throw PreconditionError("privacy budget must be positive");
  if (rounds < 1) throw PreconditionError("need at least one round");
  BudgetLedger ledger;
  ledger.total_epsilon = epsilon;
  ledger.rounds = rounds;
  ledger.per_round_ldp = epsilon / (2.0 * rounds);
  ledger.per_round_rdp = epsilon / rounds;
  return ledger;
}

double harmonic_number(long long n) {
  if (n < 1) throw PreconditionError("harmonic number needs n >= 1");
  double h = 0.0;
  for (long long k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return h;
}

double expected_max_abs_laplace(long long n, double scale) {
  if (scale < 0) throw PreconditionError("scale must be nonnegative");
  return scale * harmonic_number(n);
}

}  // namespace katzldp
