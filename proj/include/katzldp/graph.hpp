#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace katzldp {

/// Counters filled in by the edge-list loader: how much of the raw input was
/// comments, self-loops, repeated edges, or edges listed in one direction only
/// (directed inputs are always symmetrized).
struct LoadStats {
  long long data_lines = 0;
  long long comment_lines = 0;
  long long self_loops_dropped = 0;
  long long duplicates_dropped = 0;
  long long one_way_edges = 0;  // undirected edges that appeared in a single direction
};

/// Immutable undirected graph over compact node ids 0..n-1.
///
/// Adjacency lists are sorted, symmetric, self-loop free and duplicate free.
/// All accessors are const and safe to call from multiple threads.
class Graph {
 public:
  /// n isolated nodes.
  explicit Graph(int n);

  /// Build from an explicit edge list over ids in [0, n). Edges are
  /// symmetrized and deduplicated, self-loops dropped.
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int node_count() const { return n_; }
  long long edge_count() const { return m_; }
  std::span<const int> neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  /// Compact id -> id used in the source file (identity for built graphs).
  long long original_id(int v) const { return original_ids_[v]; }
  const std::vector<long long>& original_ids() const { return original_ids_; }
  /// Inverse remap for reporting: original id -> compact id, -1 if absent.
  int compact_id(long long original) const;

 private:
  friend Graph load_edge_list(std::istream&, LoadStats*);
  Graph() = default;

  int n_ = 0;
  long long m_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<long long> original_ids_;
};

/// Parse a whitespace-separated edge list ("u v" per line, '#' comments).
/// Node ids are compacted to 0..n-1 in first-appearance order; the original
/// ids stay available through Graph::original_id. Throws ParseError on
/// malformed lines (with line number) and on input with no edges at all.
Graph load_edge_list(std::istream& in, LoadStats* stats = nullptr);
Graph load_edge_list_file(const std::string& path, LoadStats* stats = nullptr);

/// Inverse of load_edge_list: one "u v" line per undirected edge, u < v,
/// compact ids. Reloading the output yields the identical adjacency structure.
void write_edge_list(const Graph& g, std::ostream& out);

/// Degree histogram plus the quantities the clipping-parameter search needs.
struct DegreeProfile {
  int max_degree = 0;
  double avg_degree = 0.0;
  std::vector<long long> histogram;  // histogram[k] = number of nodes of degree k

  long long node_count() const;
  /// Number of nodes with degree strictly greater than the threshold.
  long long count_above(int degree_threshold) const;
};

DegreeProfile degree_profile(const Graph& g);

/// Clipping configuration (X, d, N): at most N nodes exceed degree d, and
/// N*X + D*d <= X^2 with X <= D.
struct ClippingParams {
  double clip_factor = 0.0;   // X
  int degree_threshold = 0;   // d
  long long heavy_count = 0;  // N, recomputed from the histogram
};

/// Scan every integer threshold d in [0, D], solve N(d)*X + D*d = X^2 for the
/// smallest X, and keep the feasible candidate (X <= D) with minimal X, ties
/// broken by smaller d. The degenerate X = d = D, N = 0 always qualifies.
ClippingParams select_clipping_params(const DegreeProfile& profile);

/// Spectral radius of the adjacency matrix by power iteration with the
/// all-ones start vector; stops when successive Rayleigh-quotient estimates
/// change by less than tol. The estimate is ||A x||/||x||, i.e. the Rayleigh
/// quotient of A^2, so bipartite graphs (where +/-lambda_max pair up)
/// converge too. Throws ConvergenceError carrying the last estimate if
/// max_iter is exhausted.
double max_eigenvalue(const Graph& g, double tol = 1e-6, int max_iter = 1000);

}  // namespace katzldp
