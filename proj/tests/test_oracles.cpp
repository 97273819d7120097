#include <doctest.h>

#include <random>

#include "core/oracles.hpp"

using namespace cs;

namespace {

// Two disjoint K4 blocks joined by the triangle {2, 3, 4}.
Graph bridged_blocks_graph() {
  return Graph::build(8, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
                          {4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7},
                          {2, 4}, {3, 4}});
}

Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (unit(rng) < p) edges.emplace_back(u, v);
    }
  }
  return Graph::build(n, edges);
}

}  // namespace

TEST_SUITE("oracles") {

TEST_CASE("k-core peels low-degree vertices and keeps q's component") {
  Graph g = Graph::build(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {4, 5}});
  CHECK(k_core_community(g, 0, 2) == VertexSet{0, 1, 2});
  CHECK(k_core_community(g, 3, 2).empty());
  CHECK(k_core_community(g, 0, 1) == VertexSet{0, 1, 2, 3});
  CHECK(k_core_community(g, 4, 1) == VertexSet{4, 5});
  CHECK(k_core_community(g, 0, 3).empty());
}

TEST_CASE("k-truss keeps edges with enough triangles") {
  Graph g = bridged_blocks_graph();
  // At k=4 each surviving edge needs 2 triangles among survivors; the
  // bridge edges 2-4 and 3-4 lie in only 1, so the blocks split apart.
  CHECK(k_truss_community(g, 0, 4) == VertexSet{0, 1, 2, 3});
  CHECK(k_truss_community(g, 5, 4) == VertexSet{4, 5, 6, 7});
  // k=3 needs 1 triangle per edge, which the bridge triangle provides.
  CHECK(k_truss_community(g, 0, 3) == VertexSet{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(k_truss_community(g, 0, 5).empty());
}

TEST_CASE("k-clique returns the largest clique through q, lex on ties") {
  Graph g = Graph::build(6, {{0, 1}, {0, 2}, {1, 2},   // triangle A
                             {0, 4}, {0, 5}, {4, 5}}); // triangle B
  // Two maximum cliques of size 3 contain 0; {0,1,2} is lex-smaller.
  CHECK(k_clique_community(g, 0, 3) == VertexSet{0, 1, 2});
  CHECK(k_clique_community(g, 4, 3) == VertexSet{0, 4, 5});
  CHECK(k_clique_community(g, 0, 4).empty());
  CHECK(k_clique_community(g, 3, 2).empty());  // isolated vertex
}

TEST_CASE("global min cut on a barbell finds the bridge") {
  Graph g = Graph::build(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3},
                             {3, 4}, {3, 5}, {4, 5}});
  CutResult cut = global_min_cut(g);
  CHECK(cut.value == 1);
  bool left = cut.side == VertexSet{0, 1, 2};
  bool right = cut.side == VertexSet{3, 4, 5};
  CHECK((left || right));
  CHECK_THROWS_AS(global_min_cut(Graph::build(1, {})), CsError);
  CHECK_THROWS_AS(global_min_cut(Graph::build(3, {{0, 1}})), CsError);
}

TEST_CASE("k-ecc recurses along q's side of weak cuts") {
  Graph g = Graph::build(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3},
                             {3, 4}, {3, 5}, {4, 5}});
  CHECK(k_ecc_community(g, 0, 2) == VertexSet{0, 1, 2});
  CHECK(k_ecc_community(g, 4, 2) == VertexSet{3, 4, 5});
  CHECK(k_ecc_community(g, 0, 3).empty());
  Graph cycle = Graph::build(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  CHECK(k_ecc_community(cycle, 2, 2) == VertexSet{0, 1, 2, 3});
}

TEST_CASE("oracle dispatch matches the per-metric functions") {
  Graph g = bridged_blocks_graph();
  CHECK(oracle_community(g, 0, {MetricKind::Core, 3}) ==
        k_core_community(g, 0, 3));
  CHECK(oracle_community(g, 0, {MetricKind::Truss, 4}) ==
        k_truss_community(g, 0, 4));
  CHECK(oracle_community(g, 0, {MetricKind::Clique, 4}) ==
        k_clique_community(g, 0, 4));
  CHECK(oracle_community(g, 0, {MetricKind::Ecc, 3}) ==
        k_ecc_community(g, 0, 3));
}

TEST_CASE("fast oracles agree with the exponential reference") {
  std::mt19937_64 rng(20260826);
  const MetricKind kinds[] = {MetricKind::Core, MetricKind::Truss,
                              MetricKind::Clique, MetricKind::Ecc};
  for (int trial = 0; trial < 60; ++trial) {
    int n = 4 + static_cast<int>(rng() % 6);  // 4..9
    Graph g = random_graph(n, 0.45, rng);
    int q = static_cast<int>(rng() % n);
    for (MetricKind kind : kinds) {
      for (int k = 2; k <= 4; ++k) {
        if (kind == MetricKind::Truss && k < 3) continue;
        Metric metric{kind, k};
        CAPTURE(trial);
        CAPTURE(static_cast<int>(kind));
        CAPTURE(k);
        CHECK(oracle_community(g, q, metric) ==
              brute_force_community(g, q, metric));
      }
    }
  }
}

TEST_CASE("reference oracle rejects oversized graphs") {
  std::mt19937_64 rng(1);
  Graph g = random_graph(13, 0.3, rng);
  CHECK_THROWS_AS(brute_force_community(g, 0, {MetricKind::Core, 2}), CsError);
}

}  // TEST_SUITE
