#include "core/decider.hpp"

#include <algorithm>
#include <map>

namespace cs {

const char* depth_preference_name(DepthPreference p) {
  return p == DepthPreference::Later ? "later" : "earlier";
}

DepthPreference parse_depth_preference(const std::string& s) {
  if (s == "later") return DepthPreference::Later;
  if (s == "earlier") return DepthPreference::Earlier;
  throw CsError(ErrorCode::ConfigInvalid,
                "depth_preference must be 'later' or 'earlier'");
}

std::vector<CandidateProfile> aggregate_features(
    const DialogueTranscript& transcript) {
  std::map<VertexSet, CandidateProfile> merged;
  for (const auto& round : transcript.rounds) {
    if (!round.solver.community) continue;  // bias turns carry no candidate
    const VertexSet& community = *round.solver.community;
    double score = round.validator.score.value_or(0.0);
    auto [it, inserted] = merged.try_emplace(community);
    CandidateProfile& profile = it->second;
    if (inserted) {
      profile.community = community;
      profile.first_round = round.solver.round;
    }
    profile.avg_score += score;  // sum for now, divided below
    profile.frequency += 1;
  }
  if (merged.empty()) {
    throw CsError(ErrorCode::NoCandidates, "every round was bias-flagged");
  }
  std::vector<CandidateProfile> profiles;
  profiles.reserve(merged.size());
  for (auto& [community, profile] : merged) {
    profile.avg_score /= profile.frequency;
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

Selection select(const std::vector<CandidateProfile>& profiles,
                 DepthPreference preference) {
  if (profiles.empty()) {
    throw CsError(ErrorCode::NoCandidates, "no candidate profiles");
  }
  std::vector<const CandidateProfile*> pool;
  pool.reserve(profiles.size());
  for (const auto& p : profiles) pool.push_back(&p);

  auto filter_max = [&pool](auto key) {
    auto best = key(*pool.front());
    for (const auto* p : pool) best = std::max(best, key(*p));
    std::erase_if(pool, [&](const CandidateProfile* p) {
      return key(*p) != best;
    });
  };

  filter_max([](const CandidateProfile& p) { return p.avg_score; });
  if (pool.size() == 1) return {pool.front()->community, "avg_score"};

  filter_max([](const CandidateProfile& p) { return p.frequency; });
  if (pool.size() == 1) return {pool.front()->community, "frequency"};

  if (preference == DepthPreference::Later) {
    filter_max([](const CandidateProfile& p) { return p.first_round; });
  } else {
    filter_max([](const CandidateProfile& p) { return -p.first_round; });
  }
  if (pool.size() == 1) return {pool.front()->community, "depth"};

  const CandidateProfile* winner = pool.front();
  for (const auto* p : pool) {
    if (std::lexicographical_compare(p->community.begin(), p->community.end(),
                                     winner->community.begin(),
                                     winner->community.end())) {
      winner = p;
    }
  }
  return {winner->community, "lex"};
}

DeciderOutcome decide(const DialogueTranscript& transcript,
                      DepthPreference preference) {
  DeciderOutcome outcome;
  outcome.depth_preference = depth_preference_name(preference);
  try {
    Selection selection = select(aggregate_features(transcript), preference);
    outcome.selected = std::move(selection.community);
    outcome.criterion = std::move(selection.criterion);
  } catch (const CsError& e) {
    if (e.code() != ErrorCode::NoCandidates) throw;
    outcome.criterion = "no_candidates";
  }
  return outcome;
}

}  // namespace cs
