#include "katzldp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "katzldp/errors.hpp"

namespace katzldp {

namespace {

// Packs an undirected pair for dedup sets. Compact ids stay well below 2^32.
std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

void sort_adjacency(std::vector<std::vector<int>>& adj) {
  for (auto& row : adj) std::sort(row.begin(), row.end());
}

}  // namespace

Graph::Graph(int n) : n_(n), m_(0), adj_(n) {
  if (n < 1) throw PreconditionError("graph needs at least one node");
  original_ids_.resize(n);
  for (int v = 0; v < n; ++v) original_ids_[v] = v;
}

int Graph::compact_id(long long original) const {
  for (int v = 0; v < n_; ++v)
    if (original_ids_[v] == original) return v;
  return -1;
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g(n);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw PreconditionError("edge endpoint out of range");
    if (u == v) continue;
    if (!seen.insert(edge_key(u, v)).second) continue;
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
    ++g.m_;
  }
  sort_adjacency(g.adj_);
  return g;
}

Graph load_edge_list(std::istream& in, LoadStats* stats) {
  LoadStats local;
  LoadStats& st = stats ? *stats : local;
  st = LoadStats{};

  std::unordered_map<long long, int> compact;
  std::vector<long long> original;
  std::vector<std::pair<int, int>> directed;  // as listed, compact ids

  auto intern = [&](long long id) {
    auto [it, fresh] = compact.try_emplace(id, static_cast<int>(original.size()));
    if (fresh) original.push_back(id);
    return it->second;
  };

  std::string line;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t pos = line.find_first_not_of(" \t");
    if (pos == std::string::npos) continue;  // blank
    if (line[pos] == '#') {
      ++st.comment_lines;
      continue;
    }
    long long ids[2];
    const char* p = line.data() + pos;
    const char* end = line.data() + line.size();
    for (int k = 0; k < 2; ++k) {
      if (p == end) throw ParseError("expected two node ids", lineno);
      auto [next, ec] = std::from_chars(p, end, ids[k]);
      if (ec != std::errc() || ids[k] < 0)
        throw ParseError("expected a nonnegative integer node id", lineno);
      p = next;
      while (p != end && (*p == ' ' || *p == '\t')) ++p;
    }
    if (p != end) throw ParseError("trailing characters after two node ids", lineno);
    ++st.data_lines;
    if (ids[0] == ids[1]) {
      intern(ids[0]);
      ++st.self_loops_dropped;
      continue;
    }
    const int u = intern(ids[0]);  // interned in line order: first appearance
    const int v = intern(ids[1]);
    directed.emplace_back(u, v);
  }
  if (original.empty()) throw ParseError("empty edge list: no data lines");

  Graph g;
  g.n_ = static_cast<int>(original.size());
  g.original_ids_ = std::move(original);
  g.adj_.resize(g.n_);

  // mask bit 0: saw (min,max); bit 1: saw (max,min)
  std::unordered_map<std::uint64_t, int> direction_mask;
  direction_mask.reserve(directed.size() * 2);
  for (auto [u, v] : directed) {
    int bit = u < v ? 1 : 2;
    int& mask = direction_mask[edge_key(u, v)];
    if (mask & bit) {
      ++st.duplicates_dropped;
      continue;
    }
    if (mask == 0) {
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
      ++g.m_;
    }
    mask |= bit;
  }
  for (auto& [key, mask] : direction_mask)
    if (mask == 1 || mask == 2) ++st.one_way_edges;

  sort_adjacency(g.adj_);
  return g;
}

Graph load_edge_list_file(const std::string& path, LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return load_edge_list(in, stats);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (int u = 0; u < g.node_count(); ++u)
    for (int v : g.neighbors(u))
      if (u < v) out << u << ' ' << v << '\n';
}

long long DegreeProfile::node_count() const {
  long long total = 0;
  for (long long c : histogram) total += c;
  return total;
}

long long DegreeProfile::count_above(int degree_threshold) const {
  long long total = 0;
  for (std::size_t k = histogram.size(); k-- > 0;) {
    if (static_cast<int>(k) <= degree_threshold) break;
    total += histogram[k];
  }
  return total;
}

DegreeProfile degree_profile(const Graph& g) {
  DegreeProfile p;
  for (int v = 0; v < g.node_count(); ++v)
    p.max_degree = std::max(p.max_degree, g.degree(v));
  p.histogram.assign(p.max_degree + 1, 0);
  for (int v = 0; v < g.node_count(); ++v) ++p.histogram[g.degree(v)];
  p.avg_degree = 2.0 * static_cast<double>(g.edge_count()) / g.node_count();
  return p;
}

ClippingParams select_clipping_params(const DegreeProfile& profile) {
  const int max_deg = profile.max_degree;
  const double dd = static_cast<double>(max_deg);

  // Suffix counts: above[d] = number of nodes with degree > d.
  std::vector<long long> above(max_deg + 2, 0);
  for (int d = max_deg; d >= 0; --d)
    above[d] = above[d + 1] + (d + 1 <= max_deg ? profile.histogram[d + 1] : 0);

  bool have = false;
  ClippingParams best;
  for (int d = 0; d <= max_deg; ++d) {
    const double heavy = static_cast<double>(above[d]);
    double x = (heavy + std::sqrt(heavy * heavy + 4.0 * dd * d)) / 2.0;
    // Nudge up so the feasibility identity holds exactly in floating point.
    while (heavy * x + dd * d > x * x)
      x = std::nextafter(x, std::numeric_limits<double>::infinity());
    if (x > dd) continue;  // X <= D required; d = D always qualifies
    if (!have || x < best.clip_factor) {
      best = ClippingParams{x, d, above[d]};
      have = true;
    }
  }
  // Unreachable fallback: d = max_deg gives X = D exactly.
  if (!have) best = ClippingParams{dd, max_deg, 0};
  return best;
}

double max_eigenvalue(const Graph& g, double tol, int max_iter) {
  if (g.edge_count() < 1)
    throw PreconditionError("spectral radius needs at least one edge");
  if (tol <= 0) throw PreconditionError("tolerance must be positive");

  const int n = g.node_count();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  double prev_est = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    for (int v = 0; v < n; ++v) {
      double sum = 0.0;
      for (int u : g.neighbors(v)) sum += x[u];
      y[v] = sum;
    }
    double norm2 = 0.0;
    for (double t : y) norm2 += t * t;
    const double est = std::sqrt(norm2);  // ||A x|| with ||x|| = 1
    if (iter > 0 && std::abs(est - prev_est) < tol) return est;
    prev_est = est;
    for (int v = 0; v < n; ++v) x[v] = y[v] / est;
  }
  throw ConvergenceError("power iteration did not converge", prev_est);
}

}  // namespace katzldp
