#include "csagent.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "core/agent_loop.hpp"
#include "core/backend.hpp"
#include "core/decider.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/generators.hpp"
#include "core/graph.hpp"
#include "core/instance.hpp"
#include "core/oracles.hpp"
#include "core/prompting.hpp"

namespace {

thread_local std::string g_last_error;

csag_status status_for(cs::ErrorCode code) {
  using cs::ErrorCode;
  switch (code) {
    case ErrorCode::EndpointOutOfRange:
    case ErrorCode::SelfLoop:
    case ErrorCode::VertexNotInGraph:
    case ErrorCode::Disconnected:
    case ErrorCode::TooSmall:
    case ErrorCode::GraphTooLarge:
      return CSAG_ERR_GRAPH;
    case ErrorCode::KTooSmall:
    case ErrorCode::InvalidParams:
    case ErrorCode::InfeasibleParams:
    case ErrorCode::NoViableInstance:
      return CSAG_ERR_PARAMS;
    case ErrorCode::MalformedRecord:
    case ErrorCode::ConfigInvalid:
      return CSAG_ERR_PARSE;
    case ErrorCode::RetriesExhausted:
    case ErrorCode::AuthMissing:
    case ErrorCode::Timeout:
    case ErrorCode::RateLimited:
    case ErrorCode::ProviderError:
    case ErrorCode::ScriptExhausted:
    case ErrorCode::NoMatch:
    case ErrorCode::BackendError:
      return CSAG_ERR_BACKEND;
    case ErrorCode::NoCandidates:
    case ErrorCode::EmptyExemplarPool:
    case ErrorCode::EmptyTruth:
    case ErrorCode::EmptyRecords:
      return CSAG_ERR_EMPTY;
    case ErrorCode::IoError:
      return CSAG_ERR_IO;
  }
  return CSAG_ERR_INTERNAL;
}

template <typename Fn>
csag_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CSAG_OK;
  } catch (const cs::CsError& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return CSAG_ERR_PARSE;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return CSAG_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CSAG_ERR_INTERNAL;
  }
}

csag_status fail(csag_status status, const char* message) {
  g_last_error = message;
  return status;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int* dup_vertices(const cs::VertexSet& vs) {
  if (vs.empty()) return nullptr;
  int* out = new int[vs.size()];
  std::memcpy(out, vs.data(), vs.size() * sizeof(int));
  return out;
}

cs::Metric parse_metric(const char* metric, int k) {
  return cs::Metric{cs::parse_metric_kind(metric), k};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw cs::CsError(cs::ErrorCode::IoError, "cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw cs::CsError(cs::ErrorCode::IoError, "cannot write " + path);
  }
  out << text;
}

std::unique_ptr<cs::ChatBackend> make_backend(const nlohmann::json& cfg) {
  std::string kind = cfg.value("kind", "scripted");
  if (kind == "scripted") {
    if (!cfg.contains("script")) {
      throw cs::CsError(cs::ErrorCode::ConfigInvalid,
                        "scripted backend needs a \"script\" path");
    }
    return cs::load_scripted_backend(cfg.at("script").get<std::string>());
  }
  if (kind == "live") {
    cs::BackendConfig bc;
    bc.endpoint = cfg.value("endpoint", bc.endpoint);
    bc.model_id = cfg.value("model_id", bc.model_id);
    bc.api_key_env = cfg.value("api_key_env", bc.api_key_env);
    bc.timeout_s = cfg.value("timeout_s", bc.timeout_s);
    bc.max_attempts = cfg.value("max_attempts", bc.max_attempts);
    bc.backoff_base_s = cfg.value("backoff_base_s", bc.backoff_base_s);
    bc.log_wire = cfg.value("log_wire", bc.log_wire);
    bc.wire_log_path = cfg.value("wire_log_path", bc.wire_log_path);
    return std::make_unique<cs::HttpBackend>(bc);
  }
  throw cs::CsError(cs::ErrorCode::ConfigInvalid,
                    "backend kind must be \"scripted\" or \"live\"");
}

cs::HarnessConfig harness_from_json(const nlohmann::json& cfg) {
  cs::HarnessConfig hc;
  hc.rounds = cfg.value("rounds", hc.rounds);
  hc.sc_k = cfg.value("sc_k", hc.sc_k);
  hc.parallelism = cfg.value("parallelism", hc.parallelism);
  hc.seed = cfg.value("seed", std::uint64_t{0});
  hc.temperature = cfg.value("temperature", hc.temperature);
  hc.sc_temperature = cfg.value("sc_temperature", hc.sc_temperature);
  hc.model_id = cfg.value("model_id", hc.model_id);
  hc.depth_preference =
      cs::parse_depth_preference(cfg.value("depth_preference", "later"));
  if (hc.rounds < 1 || hc.sc_k < 1 || hc.parallelism < 1) {
    throw cs::CsError(cs::ErrorCode::ConfigInvalid,
                      "rounds, sc_k, parallelism must be >= 1");
  }
  return hc;
}

nlohmann::json summary_from_outcome(const cs::RunOutcome& outcome) {
  double f1_sum = 0.0;
  for (const auto& r : outcome.records) f1_sum += r.f1;
  nlohmann::json summary;
  summary["instances"] = outcome.records.size();
  summary["aborted"] = outcome.aborted;
  summary["mean_f1"] =
      outcome.records.empty() ? 0.0 : f1_sum / outcome.records.size();
  summary["bias_rate"] =
      outcome.records.empty() ? 0.0 : cs::bias_rate(outcome.records);
  return summary;
}

}  // namespace

struct csag_graph {
  cs::Graph graph;
};

extern "C" {

const char* csag_last_error(void) { return g_last_error.c_str(); }

void csag_string_free(char* s) { delete[] s; }

void csag_vertices_free(int* vertices) { delete[] vertices; }

csag_status csag_graph_build(int n, const int* edges, size_t edge_count,
                             csag_graph** out) {
  if (!out || (edge_count > 0 && !edges)) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(edge_count);
    for (size_t i = 0; i < edge_count; ++i) {
      pairs.emplace_back(edges[2 * i], edges[2 * i + 1]);
    }
    *out = new csag_graph{cs::Graph::build(n, pairs)};
  });
}

void csag_graph_free(csag_graph* g) { delete g; }

int csag_graph_vertex_count(const csag_graph* g) {
  return g ? g->graph.vertex_count() : 0;
}

int csag_graph_edge_count(const csag_graph* g) {
  return g ? static_cast<int>(g->graph.edges().size()) : 0;
}

int csag_graph_degree(const csag_graph* g, int v) {
  if (!g || v < 0 || v >= g->graph.vertex_count()) return -1;
  return g->graph.degree(v);
}

int csag_graph_has_edge(const csag_graph* g, int u, int v) {
  if (!g || u < 0 || v < 0 || u >= g->graph.vertex_count() ||
      v >= g->graph.vertex_count()) {
    return 0;
  }
  return g->graph.has_edge(u, v) ? 1 : 0;
}

csag_status csag_oracle_community(const csag_graph* g, const char* metric,
                                  int k, int q, int** out_vertices,
                                  size_t* out_count) {
  if (!g || !metric || !out_vertices || !out_count) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] {
    cs::VertexSet community =
        cs::oracle_community(g->graph, q, parse_metric(metric, k));
    *out_vertices = dup_vertices(community);
    *out_count = community.size();
  });
}

csag_status csag_min_cut(const csag_graph* g, int* out_value, int** out_side,
                         size_t* out_side_count) {
  if (!g || !out_value || !out_side || !out_side_count) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] {
    cs::CutResult cut = cs::global_min_cut(g->graph);
    *out_value = cut.value;
    *out_side = dup_vertices(cut.side);
    *out_side_count = cut.side.size();
  });
}

csag_status csag_verbalize(const csag_graph* g, int q, char** out_text) {
  if (!g || !out_text) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] { *out_text = dup_string(cs::verbalize_graph(g->graph, q)); });
}

csag_status csag_extract_community(const char* reply, int n,
                                   int** out_vertices, size_t* out_count) {
  if (!reply || !out_vertices || !out_count) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] {
    auto community = cs::extract_community(reply, n);
    if (community) {
      *out_vertices = dup_vertices(*community);
      *out_count = community->size();
    } else {
      *out_vertices = nullptr;
      *out_count = 0;
    }
  });
}

csag_status csag_f1(const int* pred, size_t pred_count, const int* truth,
                    size_t truth_count, double* out_f1) {
  if ((!pred && pred_count > 0) || (!truth && truth_count > 0) || !out_f1) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] {
    cs::VertexSet p = cs::make_vertex_set(std::vector<int>(pred, pred + pred_count));
    cs::VertexSet t =
        cs::make_vertex_set(std::vector<int>(truth, truth + truth_count));
    *out_f1 = cs::f1_score(p, t);
  });
}

csag_status csag_generate(const char* spec_json, const char* out_dir,
                          char** out_manifest_json) {
  if (!spec_json || !out_dir) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] {
    nlohmann::json spec = nlohmann::json::parse(spec_json);
    if (!spec.contains("datasets") || !spec["datasets"].is_array() ||
        spec["datasets"].empty()) {
      throw cs::CsError(cs::ErrorCode::ConfigInvalid,
                        "spec needs a nonempty \"datasets\" array");
    }
    std::filesystem::create_directories(out_dir);
    nlohmann::json combined = nlohmann::json::array();
    for (const auto& entry : spec["datasets"]) {
      cs::DatasetSpec ds;
      ds.dataset = cs::parse_dataset_kind(entry.value("dataset", "psg"));
      if (entry.contains("tiers")) {
        ds.tiers.clear();
        for (const auto& t : entry["tiers"]) {
          ds.tiers.push_back(cs::parse_difficulty(t.get<std::string>()));
        }
      }
      if (entry.contains("metrics")) {
        ds.metrics.clear();
        for (const auto& m : entry["metrics"]) {
          ds.metrics.push_back(cs::parse_metric_kind(m.get<std::string>()));
        }
      }
      ds.per_tier_per_metric = entry.value("count", ds.per_tier_per_metric);
      ds.base_seed = entry.value("seed", std::uint64_t{0});
      if (ds.per_tier_per_metric <= 0) {
        throw cs::CsError(cs::ErrorCode::ConfigInvalid, "count must be > 0");
      }
      cs::DatasetResult result = cs::generate_dataset(ds);
      std::string stem = cs::dataset_kind_name(ds.dataset);
      std::string data_path = std::string(out_dir) + "/" + stem + ".jsonl";
      std::string manifest_path =
          std::string(out_dir) + "/" + stem + ".manifest.json";
      cs::write_dataset(result, data_path, manifest_path);
      combined.push_back(
          nlohmann::json::parse(cs::manifest_to_json(result.manifest)));
    }
    if (out_manifest_json) {
      *out_manifest_json = dup_string(combined.dump(2));
    }
  });
}

csag_status csag_run(const char* config_json, char** out_summary_json) {
  if (!config_json) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] {
    nlohmann::json cfg = nlohmann::json::parse(config_json);
    std::string dataset_path = cfg.value("dataset_path", "");
    if (dataset_path.empty()) {
      throw cs::CsError(cs::ErrorCode::ConfigInvalid,
                        "config needs \"dataset_path\"");
    }
    std::vector<cs::TaskInstance> instances =
        cs::read_dataset_file(dataset_path);
    cs::RunMethod method =
        cs::parse_run_method(cfg.value("method", "zero-shot"));
    cs::HarnessConfig hc = harness_from_json(cfg);
    std::string out_dir = cfg.value("out_dir", "");

    if (cfg.value("dry_run", false) || cfg.value("dump_prompts", false)) {
      auto exemplars = cs::default_exemplar_pool();
      cs::PromptMethod pm = method == cs::RunMethod::FewShot
                                ? cs::PromptMethod::FewShot
                            : method == cs::RunMethod::ZeroCoT
                                ? cs::PromptMethod::ZeroCoT
                                : cs::PromptMethod::ZeroShot;
      nlohmann::json prompts = nlohmann::json::array();
      for (const auto& inst : instances) {
        std::mt19937_64 rng(hc.seed);
        cs::PromptBundle bundle = cs::build_prompt(inst, pm, exemplars, rng);
        nlohmann::json row;
        row["instance_id"] = inst.instance_id;
        row["system"] = bundle.system_role;
        row["user"] = bundle.user_prompt;
        prompts.push_back(std::move(row));
      }
      if (cfg.value("dump_prompts", false) && !out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text_file(out_dir + "/prompts.json", prompts.dump(2));
      }
      nlohmann::json summary;
      summary["instances"] = instances.size();
      summary["dry_run"] = true;
      if (out_summary_json) *out_summary_json = dup_string(summary.dump(2));
      return;
    }

    if (!cfg.contains("backend")) {
      throw cs::CsError(cs::ErrorCode::ConfigInvalid,
                        "config needs a \"backend\" object");
    }
    auto backend = make_backend(cfg["backend"]);
    if (method == cs::RunMethod::CsAgent && !out_dir.empty()) {
      hc.transcripts_dir = out_dir + "/transcripts";
    }
    cs::RunOutcome outcome = cs::run_method(method, instances, *backend, hc);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      write_text_file(out_dir + "/records.csv",
                      cs::records_to_csv(outcome.records));
      write_text_file(out_dir + "/report.csv",
                      cs::report_to_csv(cs::aggregate_report(outcome.records)));
    }
    if (out_summary_json) {
      *out_summary_json = dup_string(summary_from_outcome(outcome).dump(2));
    }
  });
}

csag_status csag_replay(const char* config_json, char** out_summary_json) {
  if (!config_json) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] {
    nlohmann::json cfg = nlohmann::json::parse(config_json);
    std::string dir = cfg.value("transcripts_dir", "");
    if (dir.empty()) {
      throw cs::CsError(cs::ErrorCode::ConfigInvalid,
                        "config needs \"transcripts_dir\"");
    }
    std::vector<cs::TaskInstance> instances;
    std::string dataset_path = cfg.value("dataset_path", "");
    if (!dataset_path.empty()) {
      instances = cs::read_dataset_file(dataset_path);
    }
    cs::DepthPreference preference =
        cs::parse_depth_preference(cfg.value("depth_preference", "later"));
    cs::ReplayResult result = cs::replay_transcripts(dir, instances, preference);
    std::string out_dir = cfg.value("out_dir", "");
    if (!out_dir.empty() && !result.records.empty()) {
      std::filesystem::create_directories(out_dir);
      write_text_file(out_dir + "/records.csv",
                      cs::records_to_csv(result.records));
      write_text_file(out_dir + "/report.csv",
                      cs::report_to_csv(cs::aggregate_report(result.records)));
    }
    if (out_summary_json) {
      double f1_sum = 0.0;
      for (const auto& r : result.records) f1_sum += r.f1;
      nlohmann::json summary;
      summary["transcripts"] = result.transcripts.size();
      summary["scored"] = result.records.size();
      summary["mean_f1"] =
          result.records.empty() ? 0.0 : f1_sum / result.records.size();
      *out_summary_json = dup_string(summary.dump(2));
    }
  });
}

csag_status csag_report(const char* records_csv_path, const char* out_dir,
                        char** out_report_csv) {
  if (!records_csv_path) {
    return fail(CSAG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guard([&] {
    std::vector<cs::EvalRecord> records =
        cs::records_from_csv(read_text_file(records_csv_path));
    std::string report = cs::report_to_csv(cs::aggregate_report(records));
    if (out_dir && *out_dir) {
      std::filesystem::create_directories(out_dir);
      write_text_file(std::string(out_dir) + "/report.csv", report);
    }
    if (out_report_csv) *out_report_csv = dup_string(report);
  });
}

}  // extern "C"
