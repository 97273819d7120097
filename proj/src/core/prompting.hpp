#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/instance.hpp"

namespace cs {

enum class PromptMethod { ZeroShot, FewShot, ZeroCoT };

const char* prompt_method_name(PromptMethod m);
PromptMethod parse_prompt_method(const std::string& s);

struct PromptBundle {
  std::string system_role;
  std::string user_prompt;
  PromptMethod method = PromptMethod::ZeroShot;
  std::optional<std::string> exemplar_id;
};

struct Exemplar {
  std::string id;
  TaskInstance instance;
  std::string worked_answer;  // ends with the canonical answer line
};

// Three lines: query node, node range, dictionary-style adjacency.
// Byte-deterministic.
std::string verbalize_graph(const Graph& g, int q);

// Inverse of the adjacency line, for round-trip checks.
struct ParsedVerbalization {
  int query = 0;
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};
ParsedVerbalization parse_verbalization(const std::string& text);

std::string metric_definition(const Metric& metric);

std::string solver_role_prompt();
std::string validator_role_prompt();
std::string task_instruction(const Metric& metric);
std::string update_instruction();      // Solver refinement rounds
std::string validation_instruction();  // Validator turns
std::string answer_contract_line();
std::string score_contract_line();
std::string step_by_step_cue();

extern const char* const kPromptTemplateVersion;

std::vector<Exemplar> default_exemplar_pool();

PromptBundle build_prompt(const TaskInstance& inst, PromptMethod method,
                          const std::vector<Exemplar>& exemplars,
                          std::mt19937_64& rng);

}  // namespace cs
