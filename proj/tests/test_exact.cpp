#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "katzldp/errors.hpp"
#include "katzldp/exact.hpp"
#include "katzldp/graph.hpp"
#include "testutil.hpp"

using namespace katzldp;

TEST_CASE("walk counts on tiny graphs") {
  Graph edge = testutil::single_edge();
  for (int i = 0; i <= 6; ++i) {
    CentralityVector p = exact_path_counts(edge, i);
    CHECK(p.values[0] == 1.0);
    CHECK(p.values[1] == 1.0);
  }

  CentralityVector tri3 = exact_path_counts(testutil::triangle(), 3);
  for (double v : tri3.values) CHECK(v == 8.0);

  Graph star = testutil::star_graph(3);
  CentralityVector p2 = exact_path_counts(star, 2);
  CHECK(p2.values[0] == 3.0);  // center
  CHECK(p2.values[1] == 3.0);  // leaf
}

TEST_CASE("brute-force walk enumeration") {
  Graph lonely(1);
  CHECK(brute_force_walk_count(lonely, 0, 0) == 1);
  CHECK(brute_force_walk_count(lonely, 0, 1) == 0);
  CHECK(brute_force_walk_count(testutil::single_edge(), 0, 5) == 1);
  CHECK(brute_force_walk_count(testutil::triangle(), 0, 2) == 4);
  CHECK_THROWS_AS(brute_force_walk_count(Graph(13), 0, 1), PreconditionError);
  CHECK_THROWS_AS(brute_force_walk_count(lonely, 0, 11), PreconditionError);
}

TEST_CASE("recursion matches enumeration on every small graph") {
  for (int n = 1; n <= 4; ++n) {
    for (const Graph& g : testutil::all_graphs(n)) {
      for (int i = 0; i <= 5; ++i) {
        CentralityVector p = exact_path_counts(g, i);
        for (int v = 0; v < n; ++v)
          REQUIRE(p.values[v] == double(brute_force_walk_count(g, v, i)));
      }
    }
  }
}

TEST_CASE("recursion matches enumeration on random graphs up to n=10") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    Graph g = testutil::random_graph(rng, 5 + trial % 6, 0.4);
    for (int i = 0; i <= 6; ++i) {
      CentralityVector p = exact_path_counts(g, i);
      for (int v = 0; v < g.node_count(); ++v)
        REQUIRE(p.values[v] == double(brute_force_walk_count(g, v, i)));
    }
  }
}

TEST_CASE("walk counts never exceed D^i") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = testutil::random_graph(rng, 10, 0.5);
    const double d = degree_profile(g).max_degree;
    for (int i = 0; i <= 5; ++i) {
      CentralityVector p = exact_path_counts(g, i);
      for (double v : p.values) CHECK(v <= std::pow(d, i) + 1e-9);
    }
  }
}

TEST_CASE("overflow flag trips past 2^53") {
  Graph k12 = testutil::clique(12);
  CHECK_FALSE(exact_path_counts(k12, 5).overflow);
  CHECK(exact_path_counts(k12, 16).overflow);  // 11^16 > 2^53
}

TEST_CASE("iterative Katz on closed forms") {
  Graph empty(4);
  CentralityVector zero = exact_katz_iterative(empty, 0.5, 10);
  for (double v : zero.values) CHECK(v == 0.0);

  // Single edge: P(k) = 1, so Katz -> alpha/(1-alpha) = 1 at alpha = 1/2.
  CentralityVector edge = exact_katz_iterative(testutil::single_edge(), 0.5, 60);
  CHECK(edge.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(edge.values[1] == doctest::Approx(1.0).epsilon(1e-12));

  // Clique: P(k) = (m-1)^k, geometric sum.
  const double a = 0.1;
  CentralityVector k5 = exact_katz_iterative(testutil::clique(5), a, 200);
  const double expected = a * 4 / (1 - a * 4);
  for (double v : k5.values) CHECK(v == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("iterative Katz is entrywise nondecreasing in the horizon") {
  std::mt19937 rng(47);
  Graph g = testutil::random_connected_graph(rng, 12);
  const double alpha = 0.4 / max_eigenvalue(g);
  CentralityVector prev = exact_katz_iterative(g, alpha, 1);
  for (int s = 2; s <= 12; ++s) {
    CentralityVector cur = exact_katz_iterative(g, alpha, s);
    for (int v = 0; v < g.node_count(); ++v) CHECK(cur.values[v] >= prev.values[v]);
    prev = cur;
  }
}

TEST_CASE("dense solve agrees with the iteration") {
  Graph empty(3);
  for (double v : exact_katz_solve(empty, 0.3).values) CHECK(v == 0.0);

  CentralityVector edge = exact_katz_solve(testutil::single_edge(), 0.5);
  CHECK(edge.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(edge.values[1] == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = testutil::random_connected_graph(rng, 5 + 4 * trial);
    const double alpha = 0.5 / max_eigenvalue(g);
    CentralityVector solve = exact_katz_solve(g, alpha);
    CentralityVector iter = exact_katz_iterative(g, alpha, 200);
    for (int v = 0; v < g.node_count(); ++v) {
      const double rel = std::abs(iter.values[v] - solve.values[v]) /
                         (std::abs(solve.values[v]) + 1e-12);
      CHECK(rel < 1e-9);
    }
  }
}

TEST_CASE("solve rejects attenuation at or above the spectral radius inverse") {
  // K2 has lambda = 1; alpha = 1 makes I - A singular.
  CHECK_THROWS_AS(exact_katz_solve(testutil::single_edge(), 1.0), PreconditionError);
  // Above the pole the solution goes negative.
  CHECK_THROWS_AS(exact_katz_solve(testutil::triangle(), 0.6), PreconditionError);
  CHECK_THROWS_AS(exact_katz_solve(Graph(2001), 0.1), PreconditionError);
}

TEST_CASE("truncation horizon covers the geometric tail") {
  const int s = katz_truncation_steps(0.85 / 162.37, 162.37);
  const double rho = 0.85;
  CHECK(std::pow(rho, s + 1) / (1 - rho) < 1e-10);
  CHECK(std::pow(rho, s) / (1 - rho) >= 1e-10);
  CHECK_THROWS_AS(katz_truncation_steps(1.0, 2.0), PreconditionError);
}

TEST_CASE("centrality CSV format") {
  CentralityVector c;
  c.values = {1.5, 0.25};
  std::ostringstream out;
  write_centrality_csv(c, out);
  CHECK(out.str() == "node,value\n0,1.5\n1,0.25\n");
}

TEST_CASE("exact operation guards") {
  CHECK_THROWS_AS(exact_path_counts(testutil::triangle(), -1), PreconditionError);
  CHECK_THROWS_AS(exact_katz_iterative(testutil::triangle(), 0.0, 5), PreconditionError);
  CHECK_THROWS_AS(exact_katz_iterative(testutil::triangle(), 0.5, 0), PreconditionError);
}
