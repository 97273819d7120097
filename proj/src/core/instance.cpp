#include "core/instance.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cs {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void malformed(const std::string& why) {
  throw CsError(ErrorCode::MalformedRecord, why);
}

}  // namespace

const char* metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::Core: return "core";
    case MetricKind::Truss: return "truss";
    case MetricKind::Clique: return "clique";
    case MetricKind::Ecc: return "ecc";
  }
  return "?";
}

const char* difficulty_name(Difficulty d) {
  switch (d) {
    case Difficulty::Easy: return "easy";
    case Difficulty::Medium: return "medium";
    case Difficulty::Hard: return "hard";
  }
  return "?";
}

const char* dataset_kind_name(DatasetKind d) {
  return d == DatasetKind::Psg ? "psg" : "lfr";
}

MetricKind parse_metric_kind(const std::string& s) {
  if (s == "core") return MetricKind::Core;
  if (s == "truss") return MetricKind::Truss;
  if (s == "clique") return MetricKind::Clique;
  if (s == "ecc") return MetricKind::Ecc;
  malformed("unknown metric '" + s + "'");
}

Difficulty parse_difficulty(const std::string& s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "medium") return Difficulty::Medium;
  if (s == "hard") return Difficulty::Hard;
  malformed("unknown difficulty '" + s + "'");
}

DatasetKind parse_dataset_kind(const std::string& s) {
  if (s == "psg") return DatasetKind::Psg;
  if (s == "lfr") return DatasetKind::Lfr;
  malformed("unknown dataset '" + s + "'");
}

std::pair<int, int> tier_vertex_range(DatasetKind dataset, Difficulty tier) {
  if (dataset == DatasetKind::Psg) {
    switch (tier) {
      case Difficulty::Easy: return {5, 10};
      case Difficulty::Medium: return {11, 25};
      case Difficulty::Hard: return {26, 35};
    }
  }
  switch (tier) {
    case Difficulty::Easy: return {10, 20};
    case Difficulty::Medium: return {21, 30};
    case Difficulty::Hard: return {31, 40};
  }
  return {0, 0};
}

namespace {

void validate_instance(const TaskInstance& inst) {
  const int n = inst.graph.vertex_count();
  if (inst.k < 2) malformed("k must be >= 2");
  if (inst.metric == MetricKind::Truss && inst.k < 3) {
    malformed("truss requires k >= 3");
  }
  if (inst.query < 0 || inst.query >= n) malformed("query outside graph");
  for (int v : inst.ground_truth) {
    if (v < 0 || v >= n) malformed("ground_truth vertex outside graph");
  }
  if (!inst.ground_truth.empty()) {
    if (!set_contains(inst.ground_truth, inst.query)) {
      malformed("query not in ground_truth");
    }
    auto sub = inst.graph.induced(inst.ground_truth);
    if (!sub.graph.is_connected()) malformed("ground_truth not connected");
  }
  auto [lo, hi] = tier_vertex_range(inst.dataset, inst.difficulty);
  if (n < lo || n > hi) {
    malformed("n=" + std::to_string(n) + " outside " +
              difficulty_name(inst.difficulty) + " tier [" +
              std::to_string(lo) + "," + std::to_string(hi) + "] for " +
              dataset_kind_name(inst.dataset));
  }
}

}  // namespace

TaskInstance read_instance(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    malformed(std::string("bad json: ") + e.what());
  }
  const char* required[] = {"instance_id", "dataset",   "difficulty",
                            "metric",      "k",         "query",
                            "n",           "adjacency", "ground_truth",
                            "seed"};
  for (const char* field : required) {
    if (!j.contains(field)) malformed(std::string("missing field ") + field);
  }
  TaskInstance inst;
  try {
    inst.instance_id = j.at("instance_id").get<std::string>();
    inst.dataset = parse_dataset_kind(j.at("dataset").get<std::string>());
    inst.difficulty = parse_difficulty(j.at("difficulty").get<std::string>());
    inst.metric = parse_metric_kind(j.at("metric").get<std::string>());
    inst.k = j.at("k").get<int>();
    inst.query = j.at("query").get<int>();
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& [key, nbrs] : j.at("adjacency").items()) {
      int u = std::stoi(key);
      for (const auto& w : nbrs) {
        int v = w.get<int>();
        if (u < v) edges.emplace_back(u, v);
      }
    }
    inst.graph = Graph::build(n, edges);
    // Symmetry of the record itself: rebuild and compare adjacency.
    for (const auto& [key, nbrs] : j.at("adjacency").items()) {
      int u = std::stoi(key);
      std::vector<int> listed = nbrs.get<std::vector<int>>();
      if (make_vertex_set(listed) != inst.graph.neighbors(u)) {
        malformed("asymmetric or unsorted adjacency at vertex " + key);
      }
    }
    inst.ground_truth = j.at("ground_truth").get<std::vector<int>>();
    if (inst.ground_truth != make_vertex_set(inst.ground_truth)) {
      malformed("ground_truth not a sorted set");
    }
    inst.seed = j.at("seed").get<std::uint64_t>();
  } catch (const CsError&) {
    throw;
  } catch (const std::exception& e) {
    malformed(std::string("bad field: ") + e.what());
  }
  validate_instance(inst);
  return inst;
}

std::string write_instance(const TaskInstance& inst) {
  validate_instance(inst);
  ordered_json j;
  j["instance_id"] = inst.instance_id;
  j["dataset"] = dataset_kind_name(inst.dataset);
  j["difficulty"] = difficulty_name(inst.difficulty);
  j["metric"] = metric_kind_name(inst.metric);
  j["k"] = inst.k;
  j["query"] = inst.query;
  j["n"] = inst.graph.vertex_count();
  ordered_json adjacency = ordered_json::object();
  for (int v = 0; v < inst.graph.vertex_count(); ++v) {
    adjacency[std::to_string(v)] = inst.graph.neighbors(v);
  }
  j["adjacency"] = std::move(adjacency);
  j["ground_truth"] = inst.ground_truth;
  j["seed"] = inst.seed;
  return j.dump();
}

std::vector<TaskInstance> read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsError(ErrorCode::IoError, "cannot open " + path);
  std::vector<TaskInstance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(read_instance(line));
    } catch (const CsError& e) {
      throw CsError(ErrorCode::MalformedRecord,
                    path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_dataset_file(const std::string& path,
                        const std::vector<TaskInstance>& instances) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CsError(ErrorCode::IoError, "cannot open " + path);
  for (const auto& inst : instances) out << write_instance(inst) << '\n';
}

}  // namespace cs
