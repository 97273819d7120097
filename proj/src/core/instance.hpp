#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/graph.hpp"

namespace cs {

enum class MetricKind { Core, Truss, Clique, Ecc };
enum class Difficulty { Easy, Medium, Hard };
enum class DatasetKind { Psg, Lfr };

struct Metric {
  MetricKind kind;
  int k;
};

const char* metric_kind_name(MetricKind kind);   // "core", "truss", ...
const char* difficulty_name(Difficulty d);       // "easy", "medium", "hard"
const char* dataset_kind_name(DatasetKind d);    // "psg", "lfr"
MetricKind parse_metric_kind(const std::string& s);
Difficulty parse_difficulty(const std::string& s);
DatasetKind parse_dataset_kind(const std::string& s);

// Inclusive |V| range of a difficulty tier for a dataset family.
std::pair<int, int> tier_vertex_range(DatasetKind dataset, Difficulty tier);

// One benchmark unit: a graph, a query, and its oracle ground truth.
struct TaskInstance {
  std::string instance_id;
  DatasetKind dataset = DatasetKind::Psg;
  Difficulty difficulty = Difficulty::Easy;
  MetricKind metric = MetricKind::Core;
  int k = 2;
  int query = 0;
  Graph graph;
  VertexSet ground_truth;
  std::uint64_t seed = 0;
};

// One canonical JSON line per instance; read and write are exact inverses
// on canonical input.
TaskInstance read_instance(const std::string& line);
std::string write_instance(const TaskInstance& inst);

std::vector<TaskInstance> read_dataset_file(const std::string& path);
void write_dataset_file(const std::string& path,
                        const std::vector<TaskInstance>& instances);

}  // namespace cs
