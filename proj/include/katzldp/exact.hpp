#pragma once

#include <iosfwd>
#include <vector>

#include "katzldp/graph.hpp"

namespace katzldp {

/// Per-node centrality (or raw walk-count) values together with how they were
/// produced: the attenuation factor (1 for plain counts) and the truncation
/// horizon (kClosedForm for the linear-solve path).
struct CentralityVector {
  static constexpr int kClosedForm = -1;

  std::vector<double> values;
  double alpha = 1.0;
  int steps = 0;
  bool overflow = false;  // some entry left the exact-integer range of double
};

/// Number of length-i walks from each node, via i sparse passes of the neighbor-sum
/// recursion. Walks may revisit nodes; "paths" in the loose sense. Values are
/// exact integers held in doubles; entries beyond 2^53 set the overflow flag.
CentralityVector exact_path_counts(const Graph& g, int length);

/// Independent oracle for exact_path_counts: explicit depth-first enumeration
/// of every neighbor sequence of the given length. Guarded to n <= 12 and
/// length <= 10 (throws PreconditionError beyond).
long long brute_force_walk_count(const Graph& g, int start, int length);

/// Truncated Katz centrality: K(0) = 1, K(i)[v] = alpha * sum of K(i-1) over
/// neighbors, Katz = sum of K(1..steps). Entrywise nondecreasing in steps.
CentralityVector exact_katz_iterative(const Graph& g, double alpha, int steps);

/// Closed-form Katz centrality from the dense linear system
/// (I - alpha*A) x = 1, returning x - 1. Guarded to n <= 2000; throws
/// PreconditionError when the system is singular or the solution is not
/// entrywise nonnegative (attenuation factor at or above 1/lambda_max).
CentralityVector exact_katz_solve(const Graph& g, double alpha);

/// Smallest S with (alpha*lambda_max)^(S+1) / (1 - alpha*lambda_max) below
/// tail_tol: the horizon at which the truncated series is "exact" for
/// experiment purposes. Requires alpha*lambda_max < 1.
int katz_truncation_steps(double alpha, double lambda_max, double tail_tol = 1e-10);

/// CSV with header "node,value", one row per compact node id.
void write_centrality_csv(const CentralityVector& c, std::ostream& out);

}  // namespace katzldp
