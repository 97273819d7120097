#pragma once

#include <string>
#include <vector>

#include "core/agent_loop.hpp"
#include "core/graph.hpp"

namespace cs {

enum class DepthPreference { Later, Earlier };

const char* depth_preference_name(DepthPreference p);
DepthPreference parse_depth_preference(const std::string& s);

struct CandidateProfile {
  VertexSet community;
  double avg_score = 0.0;  // missing scores enter the mean as 0.0
  int frequency = 0;
  int first_round = 0;  // earliest round index where the set appeared
};

// One profile per distinct community across non-bias Solver turns.
std::vector<CandidateProfile> aggregate_features(
    const DialogueTranscript& transcript);

struct Selection {
  VertexSet community;
  std::string criterion;  // "avg_score" | "frequency" | "depth" | "lex"
};

// Maximize avg_score, then frequency, then refinement depth (direction per
// preference), then lexicographically smallest set.
Selection select(const std::vector<CandidateProfile>& profiles,
                 DepthPreference preference);

// Convenience: aggregate + select; returns an empty outcome when every
// round was bias-flagged.
DeciderOutcome decide(const DialogueTranscript& transcript,
                      DepthPreference preference);

}  // namespace cs
