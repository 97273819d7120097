// Command-line front end. Deliberately links only the public C API plus
// header-only argument/JSON helpers; all engine code stays behind csagent.h.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csagent.h"

namespace {

using nlohmann::json;

int report_failure(csag_status status, const char* what) {
  std::fprintf(stderr, "error: %s failed (status %d): %s\n", what,
               static_cast<int>(status), csag_last_error());
  return 1;
}

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) {
    throw CLI::ValidationError("--config", "cannot open " + path);
  }
  json cfg;
  in >> cfg;
  if (!cfg.is_object()) {
    throw CLI::ValidationError("--config", "config root must be an object");
  }
  return cfg;
}

// Precedence: explicit flag > environment > config file > default.
template <typename T>
void apply_flag(json& cfg, const std::string& key, const CLI::Option* opt,
                const T& value) {
  if (opt->count() > 0 || !cfg.contains(key)) cfg[key] = value;
}

std::string owned(char* text) {
  std::string out = text ? text : "";
  csag_string_free(text);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark toolkit for language-model community search"};
  app.require_subcommand(1);

  // generate -------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "Generate benchmark datasets");
  std::string gen_config, gen_out = "datasets", gen_dataset = "psg";
  std::vector<std::string> gen_tiers, gen_metrics;
  int gen_count = 10;
  std::uint64_t gen_seed = 0;
  gen->add_option("--config", gen_config, "JSON config file");
  auto* gen_dataset_opt =
      gen->add_option("--dataset", gen_dataset, "psg or lfr");
  auto* gen_tiers_opt =
      gen->add_option("--tiers", gen_tiers, "easy, medium, hard");
  auto* gen_metrics_opt =
      gen->add_option("--metrics", gen_metrics, "core, truss, clique, ecc");
  auto* gen_count_opt =
      gen->add_option("--count", gen_count, "instances per tier and metric");
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "base seed");
  auto* gen_out_opt = gen->add_option("--out", gen_out, "output directory");

  // run --------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Evaluate a method on a dataset");
  std::string run_config, run_dataset_path, run_method = "zero-shot";
  std::string run_backend = "scripted", run_script, run_out = "results";
  std::string run_endpoint, run_model, run_depth = "later";
  int run_rounds = 3, run_sc_k = 3, run_parallelism = 4;
  std::uint64_t run_seed = 0;
  double run_temperature = 0.5;
  bool run_dry = false, run_dump = false, run_log_wire = false;
  run->add_option("--config", run_config, "JSON config file");
  auto* run_dataset_opt =
      run->add_option("--dataset", run_dataset_path, "dataset JSONL path");
  auto* run_method_opt = run->add_option(
      "--method", run_method, "zero-shot, few-shot, 0-cot, sc, cs-agent");
  auto* run_rounds_opt =
      run->add_option("--rounds", run_rounds, "dialogue rounds (cs-agent)");
  auto* run_sck_opt =
      run->add_option("--sc-k", run_sc_k, "samples per instance (sc)");
  auto* run_backend_opt =
      run->add_option("--backend", run_backend, "live or scripted");
  auto* run_script_opt =
      run->add_option("--script", run_script, "scripted-backend JSON path");
  auto* run_endpoint_opt =
      run->add_option("--endpoint", run_endpoint, "live endpoint URL");
  auto* run_model_opt = run->add_option("--model", run_model, "model id");
  auto* run_parallelism_opt =
      run->add_option("--parallelism", run_parallelism, "worker threads");
  auto* run_seed_opt = run->add_option("--seed", run_seed, "base seed");
  auto* run_temperature_opt =
      run->add_option("--temperature", run_temperature, "sampling temperature");
  auto* run_depth_opt = run->add_option("--depth-preference", run_depth,
                                        "later or earlier (cs-agent ties)");
  auto* run_out_opt = run->add_option("--out", run_out, "output directory");
  auto* run_dry_opt = run->add_flag("--dry-run", run_dry,
                                    "parse and prepare without backend calls");
  auto* run_dump_opt =
      run->add_flag("--dump-prompts", run_dump, "write prompts.json and stop");
  auto* run_logwire_opt = run->add_flag(
      "--log-wire", run_log_wire, "log redacted request/response wire traffic");

  // replay -----------------------------------------------------------------
  auto* replay = app.add_subcommand(
      "replay", "Re-extract and re-select from saved transcripts");
  std::string rp_config, rp_dir, rp_dataset_path, rp_depth = "later",
                          rp_out = "results-replay";
  replay->add_option("--config", rp_config, "JSON config file");
  auto* rp_dir_opt =
      replay->add_option("--transcripts", rp_dir, "transcripts directory");
  auto* rp_dataset_opt =
      replay->add_option("--dataset", rp_dataset_path, "dataset JSONL path");
  auto* rp_depth_opt = replay->add_option("--depth-preference", rp_depth,
                                          "later or earlier");
  auto* rp_out_opt = replay->add_option("--out", rp_out, "output directory");

  // report -----------------------------------------------------------------
  auto* report =
      app.add_subcommand("report", "Aggregate a records.csv into report.csv");
  std::string rep_records, rep_out;
  report->add_option("--records", rep_records, "records.csv path")->required();
  report->add_option("--out", rep_out, "output directory (optional)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      json cfg = load_config_file(gen_config);
      json entry = json::object();
      if (cfg.contains("datasets") && cfg["datasets"].is_array() &&
          !cfg["datasets"].empty()) {
        entry = cfg["datasets"][0];
      }
      apply_flag(entry, "dataset", gen_dataset_opt, gen_dataset);
      apply_flag(entry, "count", gen_count_opt, gen_count);
      apply_flag(entry, "seed", gen_seed_opt, gen_seed);
      if (gen_tiers_opt->count() > 0 || !entry.contains("tiers")) {
        if (!gen_tiers.empty()) entry["tiers"] = gen_tiers;
      }
      if (gen_metrics_opt->count() > 0 || !entry.contains("metrics")) {
        if (!gen_metrics.empty()) entry["metrics"] = gen_metrics;
      }
      json spec;
      spec["datasets"] = json::array({entry});
      std::string out_dir =
          gen_out_opt->count() > 0 ? gen_out : cfg.value("out", gen_out);
      char* manifest = nullptr;
      csag_status status =
          csag_generate(spec.dump().c_str(), out_dir.c_str(), &manifest);
      if (status != CSAG_OK) return report_failure(status, "generate");
      std::printf("%s\n", owned(manifest).c_str());
      return 0;
    }

    if (*run) {
      json cfg = load_config_file(run_config);
      apply_flag(cfg, "dataset_path", run_dataset_opt, run_dataset_path);
      apply_flag(cfg, "method", run_method_opt, run_method);
      apply_flag(cfg, "rounds", run_rounds_opt, run_rounds);
      apply_flag(cfg, "sc_k", run_sck_opt, run_sc_k);
      apply_flag(cfg, "parallelism", run_parallelism_opt, run_parallelism);
      apply_flag(cfg, "seed", run_seed_opt, run_seed);
      apply_flag(cfg, "temperature", run_temperature_opt, run_temperature);
      apply_flag(cfg, "depth_preference", run_depth_opt, run_depth);
      apply_flag(cfg, "out_dir", run_out_opt, run_out);
      apply_flag(cfg, "dry_run", run_dry_opt, run_dry);
      apply_flag(cfg, "dump_prompts", run_dump_opt, run_dump);
      if (!cfg.contains("backend")) cfg["backend"] = json::object();
      json& backend = cfg["backend"];
      apply_flag(backend, "kind", run_backend_opt, run_backend);
      if (run_script_opt->count() > 0 || !backend.contains("script")) {
        if (!run_script.empty()) backend["script"] = run_script;
      }
      if (run_endpoint_opt->count() > 0 ||
          (!backend.contains("endpoint") && !run_endpoint.empty())) {
        if (!run_endpoint.empty()) backend["endpoint"] = run_endpoint;
      }
      if (run_model_opt->count() > 0 ||
          (!backend.contains("model_id") && !run_model.empty())) {
        if (!run_model.empty()) {
          backend["model_id"] = run_model;
          cfg["model_id"] = run_model;
        }
      }
      apply_flag(backend, "log_wire", run_logwire_opt, run_log_wire);
      if (backend["log_wire"].get<bool>() && !backend.contains("wire_log_path")) {
        backend["wire_log_path"] =
            cfg.value("out_dir", run_out) + "/wire.log";
      }
      char* summary = nullptr;
      csag_status status = csag_run(cfg.dump().c_str(), &summary);
      if (status != CSAG_OK) return report_failure(status, "run");
      std::printf("%s\n", owned(summary).c_str());
      return 0;
    }

    if (*replay) {
      json cfg = load_config_file(rp_config);
      apply_flag(cfg, "transcripts_dir", rp_dir_opt, rp_dir);
      apply_flag(cfg, "depth_preference", rp_depth_opt, rp_depth);
      apply_flag(cfg, "out_dir", rp_out_opt, rp_out);
      if (rp_dataset_opt->count() > 0 || !cfg.contains("dataset_path")) {
        if (!rp_dataset_path.empty()) cfg["dataset_path"] = rp_dataset_path;
      }
      if (!cfg.contains("transcripts_dir") ||
          cfg["transcripts_dir"].get<std::string>().empty()) {
        std::fprintf(stderr, "error: --transcripts is required\n");
        return 1;
      }
      char* summary = nullptr;
      csag_status status = csag_replay(cfg.dump().c_str(), &summary);
      if (status != CSAG_OK) return report_failure(status, "replay");
      std::printf("%s\n", owned(summary).c_str());
      return 0;
    }

    if (*report) {
      char* text = nullptr;
      csag_status status = csag_report(
          rep_records.c_str(), rep_out.empty() ? "" : rep_out.c_str(), &text);
      if (status != CSAG_OK) return report_failure(status, "report");
      std::printf("%s", owned(text).c_str());
      return 0;
    }
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
