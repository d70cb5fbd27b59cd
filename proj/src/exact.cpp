#include "katzldp/exact.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "katzldp/errors.hpp"
#include "katzldp/util.hpp"

namespace katzldp {

namespace {

constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

// Shared by the iterative oracles and (through user_round_step) the protocol:
// the neighbor sum is accumulated in adjacency order and scaled once, so the
// noise-free protocol reproduces the oracle bit for bit.
void neighbor_pass(const Graph& g, const std::vector<double>& prev,
                   std::vector<double>& out, double alpha) {
  const int n = g.node_count();
  for (int v = 0; v < n; ++v) {
    double sum = 0.0;
    for (int u : g.neighbors(v)) sum += prev[u];
    out[v] = alpha * sum;
  }
}

}  // namespace

CentralityVector exact_path_counts(const Graph& g, int length) {
  if (length < 0) throw PreconditionError("walk length must be nonnegative");
  const int n = g.node_count();
  CentralityVector result;
  result.alpha = 1.0;
  result.steps = length;
  std::vector<double> cur(n, 1.0), next(n);
  for (int i = 0; i < length; ++i) {
    neighbor_pass(g, cur, next, 1.0);
    cur.swap(next);
  }
  for (double v : cur)
    if (v > kExactIntegerLimit) result.overflow = true;
  result.values = std::move(cur);
  return result;
}

long long brute_force_walk_count(const Graph& g, int start, int length) {
  if (g.node_count() > 12 || length > 10)
    throw PreconditionError("brute-force walk enumeration limited to n <= 12, length <= 10");
  if (start < 0 || start >= g.node_count())
    throw PreconditionError("start node out of range");
  if (length < 0) throw PreconditionError("walk length must be nonnegative");
  if (length == 0) return 1;
  long long count = 0;
  for (int u : g.neighbors(start)) count += brute_force_walk_count(g, u, length - 1);
  return count;
}

CentralityVector exact_katz_iterative(const Graph& g, double alpha, int steps) {
  if (alpha <= 0) throw PreconditionError("attenuation factor must be positive");
  if (steps < 1) throw PreconditionError("need at least one step");
  const int n = g.node_count();
  CentralityVector result;
  result.alpha = alpha;
  result.steps = steps;
  result.values.assign(n, 0.0);
  std::vector<double> prev(n, 1.0), cur(n);
  for (int i = 1; i <= steps; ++i) {
    neighbor_pass(g, prev, cur, alpha);
    for (int v = 0; v < n; ++v) result.values[v] += cur[v];
    prev.swap(cur);
  }
  return result;
}

CentralityVector exact_katz_solve(const Graph& g, double alpha) {
  const int n = g.node_count();
  if (n > 2000) throw PreconditionError("dense solve limited to n <= 2000");
  if (alpha <= 0) throw PreconditionError("attenuation factor must be positive");

  // M = I - alpha*A, dense row-major; rhs = ones.
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int v = 0; v < n; ++v) {
    m[static_cast<std::size_t>(v) * n + v] = 1.0;
    for (int u : g.neighbors(v)) m[static_cast<std::size_t>(v) * n + u] = -alpha;
  }
  std::vector<double> x(n, 1.0);

  // Gaussian elimination with partial pivoting.
  std::vector<int> rows(n);
  for (int i = 0; i < n; ++i) rows[i] = i;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(m[static_cast<std::size_t>(rows[col]) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      double mag = std::abs(m[static_cast<std::size_t>(rows[r]) * n + col]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best < 1e-12)
      throw PreconditionError(
          "singular system: attenuation factor at or above 1/lambda_max");
    std::swap(rows[col], rows[pivot]);
    const std::size_t prow = static_cast<std::size_t>(rows[col]) * n;
    for (int r = col + 1; r < n; ++r) {
      const std::size_t row = static_cast<std::size_t>(rows[r]) * n;
      const double factor = m[row + col] / m[prow + col];
      if (factor == 0.0) continue;
      for (int c = col; c < n; ++c) m[row + c] -= factor * m[prow + c];
      x[rows[r]] -= factor * x[rows[col]];
    }
  }
  std::vector<double> solution(n);
  for (int col = n - 1; col >= 0; --col) {
    const std::size_t row = static_cast<std::size_t>(rows[col]) * n;
    double acc = x[rows[col]];
    for (int c = col + 1; c < n; ++c) acc -= m[row + c] * solution[c];
    solution[col] = acc / m[row + col];
  }

  CentralityVector result;
  result.alpha = alpha;
  result.steps = CentralityVector::kClosedForm;
  result.values.resize(n);
  double max_abs = 1.0;
  for (double s : solution) max_abs = std::max(max_abs, std::abs(s));
  for (int v = 0; v < n; ++v) {
    const double katz = solution[v] - 1.0;
    // The Neumann series is entrywise nonnegative whenever the series
    // converges; a clearly negative solution means alpha is too large.
    if (katz < -1e-6 * max_abs)
      throw PreconditionError(
          "negative centrality from solve: attenuation factor at or above 1/lambda_max");
    result.values[v] = katz;
  }
  return result;
}

int katz_truncation_steps(double alpha, double lambda_max, double tail_tol) {
  const double rho = alpha * lambda_max;
  if (rho <= 0 || rho >= 1)
    throw PreconditionError("truncation horizon requires 0 < alpha*lambda_max < 1");
  int steps = 1;
  double tail = rho * rho / (1.0 - rho);  // (alpha*lambda)^{S+1}/(1-alpha*lambda)
  while (tail >= tail_tol && steps < 1000000) {
    tail *= rho;
    ++steps;
  }
  return steps;
}

void write_centrality_csv(const CentralityVector& c, std::ostream& out) {
  out << "node,value\n";
  for (std::size_t v = 0; v < c.values.size(); ++v)
    out << v << ',' << format_double(c.values[v]) << '\n';
}

}  // namespace katzldp
