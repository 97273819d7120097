#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/instance.hpp"

namespace cs {

struct PsgParams {
  int n = 10;
  int dense_size = 6;
  double p_dense = 0.8;
  double p_sparse = 0.2;
  std::uint64_t seed = 0;
};

struct LfrParams {
  int n = 30;
  double tau1 = 1.8;  // degree power-law exponent
  double tau2 = 1.2;  // community-size power-law exponent
  double mu = 0.1;    // target per-vertex external-edge fraction
  double avg_degree = 5.0;
  int min_community = 5;
  int max_community = 0;  // 0: max(min_community, n/2)
  std::uint64_t seed = 0;
};

struct PsgResult {
  Graph graph;
  VertexSet planted;  // the dense subset
};

struct LfrResult {
  Graph graph;
  std::vector<VertexSet> partition;
  double realized_mixing = 0.0;
  int attempts = 1;
};

PsgResult generate_psg(const PsgParams& params);
LfrResult generate_lfr(const LfrParams& params);

// Query/k selection: q uniform over the planted region; k is the largest
// value whose oracle community is nonempty, has >= 3 vertices, and is not
// the whole vertex set (fallback: largest k with a nonempty community).
struct InstanceDraft {
  int query = 0;
  int k = 0;
  VertexSet ground_truth;
};

std::optional<InstanceDraft> draft_instance(const Graph& g,
                                            const VertexSet& planted,
                                            MetricKind kind,
                                            std::mt19937_64& rng);

struct DatasetSpec {
  DatasetKind dataset = DatasetKind::Psg;
  std::vector<Difficulty> tiers = {Difficulty::Easy, Difficulty::Medium,
                                   Difficulty::Hard};
  std::vector<MetricKind> metrics = {MetricKind::Core, MetricKind::Truss,
                                     MetricKind::Clique, MetricKind::Ecc};
  int per_tier_per_metric = 500;
  std::uint64_t base_seed = 0;
  // PSG dense-subset fraction per tier; hard graphs plant a smaller core.
  // Easy is calibrated so the mean ground-truth size on 5-10 vertex graphs
  // lands near 6.
  double dense_fraction_easy = 0.8;
  double dense_fraction_medium = 0.6;
  double dense_fraction_hard = 0.35;
};

struct ManifestRow {
  DatasetKind dataset;
  Difficulty tier;
  MetricKind metric;
  int count = 0;
  int discarded = 0;
  double mean_v = 0.0;
  double mean_e = 0.0;
  double mean_vh = 0.0;
};

struct DatasetResult {
  std::vector<TaskInstance> instances;
  std::vector<ManifestRow> manifest;
};

DatasetResult generate_dataset(const DatasetSpec& spec);

// Writes the instance file (one line per instance) and a JSON manifest.
void write_dataset(const DatasetResult& result, const std::string& dataset_path,
                   const std::string& manifest_path);

std::string manifest_to_json(const std::vector<ManifestRow>& manifest);

}  // namespace cs
