#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>

#include "core/generators.hpp"
#include "core/oracles.hpp"

using namespace cs;

TEST_SUITE("generators") {

TEST_CASE("psg is deterministic in the seed and denser inside the plant") {
  PsgParams params;
  params.n = 24;
  params.dense_size = 14;
  params.seed = 77;
  PsgResult a = generate_psg(params);
  PsgResult b = generate_psg(params);
  CHECK(a.planted == b.planted);
  CHECK(a.graph.edges() == b.graph.edges());
  params.seed = 78;
  PsgResult c = generate_psg(params);
  CHECK(a.graph.edges() != c.graph.edges());

  // Average edge density over many seeds separates the two regions.
  int inside = 0, outside = 0, inside_pairs = 0, outside_pairs = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    params.seed = seed;
    PsgResult r = generate_psg(params);
    std::vector<char> dense(params.n, 0);
    for (int v : r.planted) dense[v] = 1;
    for (int u = 0; u < params.n; ++u) {
      for (int v = u + 1; v < params.n; ++v) {
        bool in = dense[u] && dense[v];
        (in ? inside_pairs : outside_pairs) += 1;
        if (r.graph.has_edge(u, v)) (in ? inside : outside) += 1;
      }
    }
  }
  double p_in = double(inside) / inside_pairs;
  double p_out = double(outside) / outside_pairs;
  CHECK(p_in > 0.7);
  CHECK(p_out < 0.3);
}

TEST_CASE("psg rejects contradictory parameters") {
  PsgParams p;
  p.n = 5;
  p.dense_size = 9;
  CHECK_THROWS_AS(generate_psg(p), CsError);
  p.dense_size = 3;
  p.p_dense = 0.1;
  p.p_sparse = 0.5;
  CHECK_THROWS_AS(generate_psg(p), CsError);
}

TEST_CASE("lfr hits the mixing target and stays connected") {
  LfrParams params;
  params.n = 32;
  params.mu = 0.1;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    params.seed = seed;
    LfrResult r = generate_lfr(params);
    CHECK(r.graph.is_connected());
    CHECK(r.realized_mixing == doctest::Approx(params.mu).epsilon(0.5));
    CHECK(std::abs(r.realized_mixing - params.mu) <= 0.05);
    // Partition covers every vertex exactly once.
    std::set<int> seen;
    for (const auto& community : r.partition) {
      CHECK(community.size() >= 3);
      for (int v : community) CHECK(seen.insert(v).second);
    }
    CHECK(static_cast<int>(seen.size()) == params.n);
    // Deterministic replay.
    LfrResult again = generate_lfr(params);
    CHECK(again.graph.edges() == r.graph.edges());
    CHECK(again.partition == r.partition);
  }
}

TEST_CASE("lfr with mu zero keeps communities internally connected") {
  LfrParams params;
  params.n = 24;
  params.mu = 0.0;
  params.seed = 5;
  LfrResult r = generate_lfr(params);
  CHECK(r.realized_mixing == 0.0);
  for (const auto& community : r.partition) {
    CHECK(r.graph.induced(community).graph.is_connected());
  }
}

TEST_CASE("draft picks the largest viable k for the query") {
  // Triangle {0,1,2} plus pendant 3: 2-core is the triangle.
  Graph g = Graph::build(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  std::mt19937_64 rng(3);
  auto draft = draft_instance(g, {0, 1, 2}, MetricKind::Core, rng);
  REQUIRE(draft.has_value());
  CHECK(set_contains({0, 1, 2}, draft->query));
  CHECK(draft->k == 2);
  CHECK(draft->ground_truth == VertexSet{0, 1, 2});
  CHECK(draft->ground_truth ==
        k_core_community(g, draft->query, draft->k));
}

TEST_CASE("dataset generation produces valid, unique, tiered instances") {
  DatasetSpec spec;
  spec.dataset = DatasetKind::Psg;
  spec.tiers = {Difficulty::Easy};
  spec.metrics = {MetricKind::Core, MetricKind::Truss};
  spec.per_tier_per_metric = 6;
  spec.base_seed = 11;
  DatasetResult result = generate_dataset(spec);
  CHECK(result.instances.size() == 12);
  std::set<std::string> ids;
  auto [lo, hi] = tier_vertex_range(DatasetKind::Psg, Difficulty::Easy);
  for (const auto& inst : result.instances) {
    CHECK(ids.insert(inst.instance_id).second);
    CHECK(inst.graph.vertex_count() >= lo);
    CHECK(inst.graph.vertex_count() <= hi);
    CHECK(set_contains(inst.ground_truth, inst.query));
    CHECK(inst.ground_truth.size() >= 3);
    CHECK(inst.ground_truth ==
          oracle_community(inst.graph, inst.query, {inst.metric, inst.k}));
    // Maximality of k: the next tighter community is different or empty.
    VertexSet next =
        oracle_community(inst.graph, inst.query, {inst.metric, inst.k + 1});
    bool tighter_unusable = next.empty() || next.size() < 3 ||
                            static_cast<int>(next.size()) ==
                                inst.graph.vertex_count();
    CHECK(tighter_unusable);
  }
  for (const auto& row : result.manifest) {
    CHECK(row.count == 6);
    CHECK(row.mean_v >= lo);
    CHECK(row.mean_v <= hi);
  }
  // Determinism across calls.
  DatasetResult again = generate_dataset(spec);
  REQUIRE(again.instances.size() == result.instances.size());
  for (std::size_t i = 0; i < result.instances.size(); ++i) {
    CHECK(write_instance(again.instances[i]) ==
          write_instance(result.instances[i]));
  }
}

TEST_CASE("dataset files round-trip through the canonical format") {
  DatasetSpec spec;
  spec.dataset = DatasetKind::Lfr;
  spec.tiers = {Difficulty::Easy};
  spec.metrics = {MetricKind::Clique};
  spec.per_tier_per_metric = 3;
  spec.base_seed = 9;
  DatasetResult result = generate_dataset(spec);

  auto dir = std::filesystem::temp_directory_path() / "csgen-test";
  std::filesystem::create_directories(dir);
  std::string data_path = (dir / "d.jsonl").string();
  std::string manifest_path = (dir / "m.json").string();
  write_dataset(result, data_path, manifest_path);
  std::vector<TaskInstance> loaded = read_dataset_file(data_path);
  REQUIRE(loaded.size() == result.instances.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(write_instance(loaded[i]) == write_instance(result.instances[i]));
  }
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
