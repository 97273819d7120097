#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/agent_loop.hpp"
#include "core/backend.hpp"
#include "core/decider.hpp"
#include "core/instance.hpp"

namespace cs {

// precision/recall harmonic mean over vertex sets; empty prediction -> 0.
double f1_score(const VertexSet& pred, const VertexSet& truth);

enum class RunMethod { ZeroShot, FewShot, ZeroCoT, SelfConsistency, CsAgent };

const char* run_method_name(RunMethod m);
RunMethod parse_run_method(const std::string& s);

struct EvalRecord {
  std::string instance_id;
  DatasetKind dataset = DatasetKind::Psg;
  MetricKind metric = MetricKind::Core;
  Difficulty difficulty = Difficulty::Easy;
  std::string method;
  std::optional<VertexSet> predicted;
  double f1 = 0.0;
  bool bias = false;
  int rounds_used = 0;
  TokenUsage tokens;
  long long wall_ms = 0;
  bool aborted = false;
};

struct HarnessConfig {
  PromptMethod method = PromptMethod::ZeroShot;
  int rounds = 3;
  int sc_k = 3;
  int parallelism = 4;
  std::uint64_t seed = 0;
  double temperature = 0.5;
  double sc_temperature = 0.8;
  std::string model_id = "scripted";
  DepthPreference depth_preference = DepthPreference::Later;
  std::string transcripts_dir;  // empty: keep transcripts in memory only
};

struct RunOutcome {
  std::vector<EvalRecord> records;  // sorted by instance_id
  int aborted = 0;
};

RunOutcome run_baseline(const std::vector<TaskInstance>& instances,
                        ChatBackend& backend, const HarnessConfig& cfg);
RunOutcome run_cs_agent(const std::vector<TaskInstance>& instances,
                        ChatBackend& backend, const HarnessConfig& cfg);
RunOutcome run_self_consistency(const std::vector<TaskInstance>& instances,
                                ChatBackend& backend, const HarnessConfig& cfg);
RunOutcome run_method(RunMethod method,
                      const std::vector<TaskInstance>& instances,
                      ChatBackend& backend, const HarnessConfig& cfg);

// Majority vote over candidate communities: vertex v enters the output iff
// 2*c_v >= k where c_v counts candidates containing v. Bias-flagged
// candidates cast no votes but still count toward k.
VertexSet majority_vote(const std::vector<std::optional<VertexSet>>& candidates);

double bias_rate(const std::vector<EvalRecord>& records);

struct ReportRow {
  DatasetKind dataset;
  MetricKind metric;
  Difficulty difficulty;
  std::string method;
  double mean_f1_pct = 0.0;  // percentage, Table-style
  double bias = 0.0;
  int n_instances = 0;
};

std::vector<ReportRow> aggregate_report(const std::vector<EvalRecord>& records);

struct SweepRow {
  int rounds = 0;
  double mean_f1 = 0.0;
  double mean_tokens = 0.0;  // prompt + completion per instance
};

// A full cs-agent run per requested round count.
std::vector<SweepRow> rounds_sweep(const std::vector<TaskInstance>& instances,
                                   const std::vector<RunOutcome>& runs);

std::string records_to_csv(const std::vector<EvalRecord>& records);
std::vector<EvalRecord> records_from_csv(const std::string& text);
std::string report_to_csv(const std::vector<ReportRow>& rows);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Merge keeps existing rows and adds fresh ones; sorted by instance_id.
std::vector<EvalRecord> merge_records(std::vector<EvalRecord> existing,
                                      const std::vector<EvalRecord>& fresh);

// Offline re-extraction and re-selection from persisted transcripts.
struct ReplayResult {
  std::vector<DialogueTranscript> transcripts;
  std::vector<EvalRecord> records;  // empty when no dataset is supplied
};
ReplayResult replay_transcripts(const std::string& transcripts_dir,
                                const std::vector<TaskInstance>& dataset,
                                DepthPreference preference);

}  // namespace cs
