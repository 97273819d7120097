#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/backend.hpp"
#include "core/instance.hpp"
#include "core/prompting.hpp"

namespace cs {

// Robust community extraction. Tier 1: the last contract line
// "Community: [...]". Tier 2: the last standalone bracketed integer list.
// No parseable, in-range, nonempty set -> output bias (nullopt).
std::optional<VertexSet> extract_community(const std::string& text, int n);

// Last "Score: x" token, clamped to [0,5]; nullopt when absent.
std::optional<double> extract_score(const std::string& text);

struct SolverTurn {
  int round = 0;
  std::vector<ChatMessage> request;
  std::string raw_text;
  std::optional<VertexSet> community;  // nullopt = bias-flagged
};

struct ValidatorTurn {
  int round = 0;
  std::vector<ChatMessage> request;
  std::string raw_text;
  std::string feedback;
  std::optional<double> score;  // nullopt = missing (scored as 0 downstream)
  bool purge_applied = false;
};

struct DialogueRound {
  SolverTurn solver;
  ValidatorTurn validator;
};

struct DialogueConfig {
  int rounds = 3;
  PromptMethod method = PromptMethod::ZeroShot;
  double temperature = 0.5;
  std::string model_id = "scripted";
  std::uint64_t seed = 0;
};

struct DeciderOutcome {
  std::optional<VertexSet> selected;
  std::string criterion;  // winning selection stage, for the audit footer
  std::string depth_preference = "later";
};

struct DialogueTranscript {
  std::string instance_id;
  DialogueConfig config;
  std::vector<DialogueRound> rounds;
  DeciderOutcome decider;
  bool aborted = false;
  std::string abort_reason;
  TokenUsage usage;
};

struct AgentState {
  std::string role;  // "solver" | "validator"
  std::string role_prompt;
  std::vector<ChatMessage> memory;  // prior exchanges, oldest first
};

// One Solver exchange: round 0 sends the task prompt, later rounds send the
// Validator feedback plus the update instruction on top of solver memory.
SolverTurn solver_step(AgentState& state, const TaskInstance& inst,
                       const PromptBundle& task_prompt, int round,
                       const std::string& previous_feedback,
                       ChatBackend& backend, const DialogueConfig& cfg,
                       TokenUsage& usage);

// One Validator exchange; `community` nullopt signals a bias-flagged Solver
// turn. Purging (when triggered by the caller) must happen before this call.
ValidatorTurn validator_step(AgentState& state, const TaskInstance& inst,
                             const std::optional<VertexSet>& community,
                             int round, bool purge_applied,
                             ChatBackend& backend, const DialogueConfig& cfg,
                             TokenUsage& usage);

DialogueTranscript run_dialogue(const TaskInstance& inst, ChatBackend& backend,
                                const DialogueConfig& cfg,
                                const std::vector<Exemplar>& exemplars);

std::string transcript_to_json(const DialogueTranscript& transcript);
DialogueTranscript transcript_from_json(const std::string& text);

}  // namespace cs
