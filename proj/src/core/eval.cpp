#include "core/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace cs {

double f1_score(const VertexSet& pred, const VertexSet& truth) {
  if (truth.empty()) {
    throw CsError(ErrorCode::EmptyTruth, "ground truth must be nonempty");
  }
  if (pred.empty()) return 0.0;
  double overlap = static_cast<double>(set_intersection(pred, truth).size());
  double precision = overlap / static_cast<double>(pred.size());
  double recall = overlap / static_cast<double>(truth.size());
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

const char* run_method_name(RunMethod m) {
  switch (m) {
    case RunMethod::ZeroShot: return "zero-shot";
    case RunMethod::FewShot: return "few-shot";
    case RunMethod::ZeroCoT: return "0-cot";
    case RunMethod::SelfConsistency: return "sc";
    case RunMethod::CsAgent: return "cs-agent";
  }
  return "?";
}

RunMethod parse_run_method(const std::string& s) {
  if (s == "zero-shot") return RunMethod::ZeroShot;
  if (s == "few-shot") return RunMethod::FewShot;
  if (s == "0-cot") return RunMethod::ZeroCoT;
  if (s == "sc") return RunMethod::SelfConsistency;
  if (s == "cs-agent") return RunMethod::CsAgent;
  throw CsError(ErrorCode::ConfigInvalid, "unknown method '" + s + "'");
}

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t instance_seed(std::uint64_t base, const std::string& id) {
  return base ^ fnv1a(id);
}

EvalRecord base_record(const TaskInstance& inst, const std::string& method) {
  EvalRecord record;
  record.instance_id = inst.instance_id;
  record.dataset = inst.dataset;
  record.metric = inst.metric;
  record.difficulty = inst.difficulty;
  record.method = method;
  return record;
}

void finish_record(EvalRecord& record, const TaskInstance& inst) {
  if (record.predicted) {
    record.f1 = f1_score(*record.predicted, inst.ground_truth);
    record.bias = false;
  } else {
    record.f1 = 0.0;
    record.bias = true;
  }
}

// Instance-level fan-out with results placed by index, so output order is
// independent of scheduling.
void parallel_for(std::size_t count, int parallelism,
                  const std::function<void(std::size_t)>& work) {
  int workers = std::max(1, parallelism);
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        work(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

RunOutcome collect(std::vector<EvalRecord> records) {
  RunOutcome outcome;
  std::sort(records.begin(), records.end(),
            [](const EvalRecord& a, const EvalRecord& b) {
              return a.instance_id < b.instance_id;
            });
  for (const auto& r : records) {
    if (r.aborted) ++outcome.aborted;
  }
  outcome.records = std::move(records);
  return outcome;
}

}  // namespace

RunOutcome run_baseline(const std::vector<TaskInstance>& instances,
                        ChatBackend& backend, const HarnessConfig& cfg) {
  const auto exemplars = default_exemplar_pool();
  std::vector<EvalRecord> records(instances.size());
  parallel_for(instances.size(), cfg.parallelism, [&](std::size_t i) {
    const TaskInstance& inst = instances[i];
    std::string method_name;
    switch (cfg.method) {
      case PromptMethod::ZeroShot: method_name = "zero-shot"; break;
      case PromptMethod::FewShot: method_name = "few-shot"; break;
      case PromptMethod::ZeroCoT: method_name = "0-cot"; break;
    }
    EvalRecord record = base_record(inst, method_name);
    auto started = std::chrono::steady_clock::now();
    try {
      std::mt19937_64 rng(instance_seed(cfg.seed, inst.instance_id));
      PromptBundle bundle = build_prompt(inst, cfg.method, exemplars, rng);
      ChatRequest req;
      req.messages = {{"system", bundle.system_role},
                      {"user", bundle.user_prompt}};
      req.temperature = cfg.temperature;
      req.model_id = cfg.model_id;
      ChatResponse response = backend.complete(req);
      record.tokens = response.usage;
      record.rounds_used = 1;
      record.predicted =
          extract_community(response.text, inst.graph.vertex_count());
    } catch (const CsError&) {
      record.aborted = true;
    }
    finish_record(record, inst);
    record.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    records[i] = std::move(record);
  });
  return collect(std::move(records));
}

RunOutcome run_cs_agent(const std::vector<TaskInstance>& instances,
                        ChatBackend& backend, const HarnessConfig& cfg) {
  const auto exemplars = default_exemplar_pool();
  if (!cfg.transcripts_dir.empty()) {
    std::filesystem::create_directories(cfg.transcripts_dir);
  }
  std::vector<EvalRecord> records(instances.size());
  parallel_for(instances.size(), cfg.parallelism, [&](std::size_t i) {
    const TaskInstance& inst = instances[i];
    std::string method_name = std::string("cs-agent(") +
                              prompt_method_name(cfg.method) + ")";
    EvalRecord record = base_record(inst, method_name);
    auto started = std::chrono::steady_clock::now();
    DialogueConfig dialogue_cfg;
    dialogue_cfg.rounds = cfg.rounds;
    dialogue_cfg.method = cfg.method;
    dialogue_cfg.temperature = cfg.temperature;
    dialogue_cfg.model_id = cfg.model_id;
    dialogue_cfg.seed = instance_seed(cfg.seed, inst.instance_id);
    DialogueTranscript transcript =
        run_dialogue(inst, backend, dialogue_cfg, exemplars);
    transcript.decider = decide(transcript, cfg.depth_preference);
    record.predicted = transcript.decider.selected;
    record.rounds_used = static_cast<int>(transcript.rounds.size());
    record.tokens = transcript.usage;
    record.aborted = transcript.aborted;
    if (!cfg.transcripts_dir.empty()) {
      std::string path =
          cfg.transcripts_dir + "/" + inst.instance_id + ".json";
      std::ofstream out(path, std::ios::trunc);
      out << transcript_to_json(transcript) << '\n';
    }
    finish_record(record, inst);
    record.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    records[i] = std::move(record);
  });
  return collect(std::move(records));
}

VertexSet majority_vote(
    const std::vector<std::optional<VertexSet>>& candidates) {
  const int k = static_cast<int>(candidates.size());
  std::map<int, int> counts;
  for (const auto& candidate : candidates) {
    if (!candidate) continue;
    for (int v : *candidate) ++counts[v];
  }
  VertexSet out;
  for (auto [v, c] : counts) {
    if (2 * c >= k) out.push_back(v);
  }
  return out;
}

RunOutcome run_self_consistency(const std::vector<TaskInstance>& instances,
                                ChatBackend& backend,
                                const HarnessConfig& cfg) {
  if (cfg.sc_k < 1) {
    throw CsError(ErrorCode::ConfigInvalid, "sc_k must be >= 1");
  }
  const auto exemplars = default_exemplar_pool();
  std::vector<EvalRecord> records(instances.size());
  parallel_for(instances.size(), cfg.parallelism, [&](std::size_t i) {
    const TaskInstance& inst = instances[i];
    EvalRecord record = base_record(inst, "sc");
    auto started = std::chrono::steady_clock::now();
    std::vector<std::optional<VertexSet>> candidates;
    bool any_ok = false;
    try {
      std::mt19937_64 rng(instance_seed(cfg.seed, inst.instance_id));
      for (int c = 0; c < cfg.sc_k; ++c) {
        PromptBundle bundle =
            build_prompt(inst, PromptMethod::ZeroShot, exemplars, rng);
        ChatRequest req;
        req.messages = {{"system", bundle.system_role},
                        {"user", bundle.user_prompt}};
        req.temperature = cfg.sc_temperature;
        req.model_id = cfg.model_id;
        ChatResponse response = backend.complete(req);
        record.tokens.prompt += response.usage.prompt;
        record.tokens.completion += response.usage.completion;
        auto community =
            extract_community(response.text, inst.graph.vertex_count());
        if (community) any_ok = true;
        candidates.push_back(std::move(community));
      }
    } catch (const CsError&) {
      record.aborted = true;
    }
    record.rounds_used = static_cast<int>(candidates.size());
    if (any_ok) {
      VertexSet vote = majority_vote(candidates);
      record.predicted = std::move(vote);
    }
    finish_record(record, inst);
    record.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    records[i] = std::move(record);
  });
  return collect(std::move(records));
}

RunOutcome run_method(RunMethod method,
                      const std::vector<TaskInstance>& instances,
                      ChatBackend& backend, const HarnessConfig& cfg) {
  HarnessConfig local = cfg;
  switch (method) {
    case RunMethod::ZeroShot:
      local.method = PromptMethod::ZeroShot;
      return run_baseline(instances, backend, local);
    case RunMethod::FewShot:
      local.method = PromptMethod::FewShot;
      return run_baseline(instances, backend, local);
    case RunMethod::ZeroCoT:
      local.method = PromptMethod::ZeroCoT;
      return run_baseline(instances, backend, local);
    case RunMethod::SelfConsistency:
      return run_self_consistency(instances, backend, local);
    case RunMethod::CsAgent:
      return run_cs_agent(instances, backend, local);
  }
  throw CsError(ErrorCode::ConfigInvalid, "bad run method");
}

double bias_rate(const std::vector<EvalRecord>& records) {
  if (records.empty()) {
    throw CsError(ErrorCode::EmptyRecords, "no records");
  }
  std::size_t flagged = 0;
  for (const auto& r : records) {
    if (r.bias) ++flagged;
  }
  return static_cast<double>(flagged) / static_cast<double>(records.size());
}

std::vector<ReportRow> aggregate_report(const std::vector<EvalRecord>& records) {
  if (records.empty()) {
    throw CsError(ErrorCode::EmptyRecords, "no records");
  }
  using Key = std::tuple<int, int, int, std::string>;
  std::map<Key, std::vector<const EvalRecord*>> groups;
  for (const auto& r : records) {
    groups[{static_cast<int>(r.dataset), static_cast<int>(r.metric),
            static_cast<int>(r.difficulty), r.method}]
        .push_back(&r);
  }
  std::vector<ReportRow> rows;
  for (const auto& [key, members] : groups) {
    ReportRow row;
    row.dataset = static_cast<DatasetKind>(std::get<0>(key));
    row.metric = static_cast<MetricKind>(std::get<1>(key));
    row.difficulty = static_cast<Difficulty>(std::get<2>(key));
    row.method = std::get<3>(key);
    double f1_sum = 0.0;
    int flagged = 0;
    for (const auto* r : members) {
      f1_sum += r->f1;  // bias records contribute their zeros
      if (r->bias) ++flagged;
    }
    row.n_instances = static_cast<int>(members.size());
    row.mean_f1_pct = 100.0 * f1_sum / row.n_instances;
    row.bias = static_cast<double>(flagged) / row.n_instances;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> rounds_sweep(const std::vector<TaskInstance>& instances,
                                   const std::vector<RunOutcome>& runs) {
  std::vector<SweepRow> rows;
  for (const auto& run : runs) {
    if (run.records.empty()) continue;
    SweepRow row;
    row.rounds = run.records.front().rounds_used;
    double f1_sum = 0.0, token_sum = 0.0;
    for (const auto& r : run.records) {
      f1_sum += r.f1;
      token_sum += static_cast<double>(r.tokens.prompt + r.tokens.completion);
      row.rounds = std::max(row.rounds, r.rounds_used);
    }
    row.mean_f1 = f1_sum / static_cast<double>(run.records.size());
    row.mean_tokens = token_sum / static_cast<double>(run.records.size());
    rows.push_back(row);
  }
  (void)instances;
  return rows;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace

std::string records_to_csv(const std::vector<EvalRecord>& records) {
  std::ostringstream out;
  out << "instance_id,dataset,metric,difficulty,method,f1,bias,rounds_used,"
         "prompt_tokens,completion_tokens,wall_ms\n";
  char f1_buf[32];
  for (const auto& r : records) {
    std::snprintf(f1_buf, sizeof(f1_buf), "%.6f", r.f1);
    out << csv_escape(r.instance_id) << ',' << dataset_kind_name(r.dataset)
        << ',' << metric_kind_name(r.metric) << ','
        << difficulty_name(r.difficulty) << ',' << csv_escape(r.method) << ','
        << f1_buf << ',' << (r.bias ? "true" : "false") << ',' << r.rounds_used
        << ',' << r.tokens.prompt << ',' << r.tokens.completion << ','
        << r.wall_ms << '\n';
  }
  return out.str();
}

std::vector<EvalRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<EvalRecord> records;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != 11) {
      throw CsError(ErrorCode::MalformedRecord, "bad records csv row");
    }
    EvalRecord r;
    r.instance_id = fields[0];
    r.dataset = parse_dataset_kind(fields[1]);
    r.metric = parse_metric_kind(fields[2]);
    r.difficulty = parse_difficulty(fields[3]);
    r.method = fields[4];
    r.f1 = std::stod(fields[5]);
    r.bias = fields[6] == "true";
    r.rounds_used = std::stoi(fields[7]);
    r.tokens.prompt = std::stoll(fields[8]);
    r.tokens.completion = std::stoll(fields[9]);
    r.wall_ms = std::stoll(fields[10]);
    if (!r.bias) r.predicted = VertexSet{};  // presence only; set not stored
    records.push_back(std::move(r));
  }
  return records;
}

std::string report_to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "dataset,metric,difficulty,method,mean_f1,bias_rate,n_instances\n";
  char f1_buf[32], bias_buf[32];
  for (const auto& row : rows) {
    std::snprintf(f1_buf, sizeof(f1_buf), "%.1f", row.mean_f1_pct);
    std::snprintf(bias_buf, sizeof(bias_buf), "%.4f", row.bias);
    out << dataset_kind_name(row.dataset) << ',' << metric_kind_name(row.metric)
        << ',' << difficulty_name(row.difficulty) << ','
        << csv_escape(row.method) << ',' << f1_buf << ',' << bias_buf << ','
        << row.n_instances << '\n';
  }
  return out.str();
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "rounds,mean_f1,mean_tokens\n";
  char f1_buf[32], tok_buf[32];
  for (const auto& row : rows) {
    std::snprintf(f1_buf, sizeof(f1_buf), "%.6f", row.mean_f1);
    std::snprintf(tok_buf, sizeof(tok_buf), "%.1f", row.mean_tokens);
    out << row.rounds << ',' << f1_buf << ',' << tok_buf << '\n';
  }
  return out.str();
}

std::vector<EvalRecord> merge_records(std::vector<EvalRecord> existing,
                                      const std::vector<EvalRecord>& fresh) {
  std::map<std::string, EvalRecord> by_id;
  for (auto& r : existing) by_id.emplace(r.instance_id, std::move(r));
  for (const auto& r : fresh) by_id.insert_or_assign(r.instance_id, r);
  std::vector<EvalRecord> merged;
  merged.reserve(by_id.size());
  for (auto& [id, r] : by_id) merged.push_back(std::move(r));
  return merged;
}

ReplayResult replay_transcripts(const std::string& transcripts_dir,
                                const std::vector<TaskInstance>& dataset,
                                DepthPreference preference) {
  std::map<std::string, const TaskInstance*> by_id;
  for (const auto& inst : dataset) by_id[inst.instance_id] = &inst;

  std::vector<std::filesystem::path> paths;
  for (const auto& entry :
       std::filesystem::directory_iterator(transcripts_dir)) {
    if (entry.path().extension() == ".json") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());

  ReplayResult result;
  for (const auto& path : paths) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    DialogueTranscript transcript = transcript_from_json(buffer.str());
    const TaskInstance* inst = nullptr;
    if (auto it = by_id.find(transcript.instance_id); it != by_id.end()) {
      inst = it->second;
    }
    // Re-extract from raw text, then re-select.
    for (auto& round : transcript.rounds) {
      int n = inst ? inst->graph.vertex_count()
                   : std::numeric_limits<int>::max();
      round.solver.community = extract_community(round.solver.raw_text, n);
      round.validator.score = extract_score(round.validator.raw_text);
    }
    transcript.decider = decide(transcript, preference);
    if (inst) {
      EvalRecord record = base_record(*inst, "replay");
      record.predicted = transcript.decider.selected;
      record.rounds_used = static_cast<int>(transcript.rounds.size());
      record.tokens = transcript.usage;
      finish_record(record, *inst);
      result.records.push_back(std::move(record));
    }
    result.transcripts.push_back(std::move(transcript));
  }
  return result;
}

}  // namespace cs
