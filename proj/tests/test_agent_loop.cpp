#include <doctest.h>

#include "core/agent_loop.hpp"
#include "core/decider.hpp"

using namespace cs;

namespace {

TaskInstance triangle_pendant_instance() {
  TaskInstance inst;
  inst.instance_id = "loop-fixture";
  inst.metric = MetricKind::Core;
  inst.k = 2;
  inst.query = 0;
  inst.graph = Graph::build(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  inst.ground_truth = {0, 1, 2};
  return inst;
}

}  // namespace

TEST_SUITE("agent_loop") {

TEST_CASE("community extraction prefers the final contract line") {
  CHECK(extract_community("Community: [1, 2]\nCommunity: [0, 3]", 5) ==
        VertexSet{0, 3});
  CHECK(extract_community("thoughts...\nCommunity: [ 2 , 0 , 2 ]", 5) ==
        VertexSet{0, 2});
  // Out-of-range ids are dropped, not fatal.
  CHECK(extract_community("Community: [1, 9]", 5) == VertexSet{1});
}

TEST_CASE("fallback finds a standalone bracketed list") {
  CHECK(extract_community("the answer is [3, 1, 4].", 6) == VertexSet{1, 3, 4});
  CHECK(extract_community("first [1, 2] then [4, 5]", 6) == VertexSet{4, 5});
  // Indexing expressions and quoted keys do not count as answers.
  CHECK_FALSE(extract_community("check x[0] and adj[3]", 6).has_value());
  CHECK_FALSE(extract_community("\"0\": [1, 2] is the adjacency", 6)
                  .has_value());
}

TEST_CASE("unanswerable replies are flagged, not guessed") {
  CHECK_FALSE(extract_community("no list here", 5).has_value());
  CHECK_FALSE(extract_community("Community: []", 5).has_value());
  CHECK_FALSE(extract_community("Community: [9]", 5).has_value());
  // A verbatim echo of the contract wording is not an answer.
  CHECK_FALSE(extract_community(
                  "End your reply with exactly one line: Community: "
                  "[v1, v2, ...]",
                  5)
                  .has_value());
}

TEST_CASE("score extraction takes the last value and clamps") {
  CHECK(extract_score("Score: 3") == 3.0);
  CHECK(extract_score("Score: 2\nscore: 4.5") == 4.5);
  CHECK(extract_score("Score: 11") == 5.0);
  CHECK(extract_score("Score: -2") == 0.0);
  CHECK_FALSE(extract_score("no grade given").has_value());
}

TEST_CASE("dialogue runs rounds, threads feedback, and purges on repeats") {
  TaskInstance inst = triangle_pendant_instance();
  // Solver answers twice with the same set (different order), then improves;
  // the repeat must purge the validator before its second call.
  ScriptedBackend backend(
      {"I think Community: [0, 1]",                 // solver round 0
       "Node 0 needs another link. Score: 2",       // validator round 0
       "Keeping it. Community: [1, 0]",             // solver round 1
       "Same issue as before. Score: 2",            // validator round 1 (fresh)
       "Adding node 2. Community: [0, 1, 2]",       // solver round 2
       "All degrees check out. Score: 5"});         // validator round 2
  DialogueConfig cfg;
  cfg.rounds = 3;
  DialogueTranscript t = run_dialogue(inst, backend, cfg, {});

  REQUIRE(t.rounds.size() == 3);
  CHECK_FALSE(t.aborted);
  CHECK(t.rounds[0].solver.community == VertexSet{0, 1});
  CHECK(t.rounds[1].solver.community == VertexSet{0, 1});
  CHECK(t.rounds[2].solver.community == VertexSet{0, 1, 2});

  CHECK_FALSE(t.rounds[0].validator.purge_applied);
  CHECK(t.rounds[1].validator.purge_applied);
  CHECK_FALSE(t.rounds[2].validator.purge_applied);

  // Round 0 solver request is the task prompt; round 1 carries feedback.
  const auto& r1_request = t.rounds[1].solver.request;
  CHECK(r1_request.back().text.find("Score: 2") != std::string::npos);
  CHECK(r1_request.back().text.find(update_instruction()) !=
        std::string::npos);
  // Solver memory grows: round 2 request holds the full history.
  CHECK(t.rounds[2].solver.request.size() ==
        t.rounds[0].solver.request.size() + 4);

  // Post-purge validator request restates the graph (fresh memory).
  const auto& v1_request = t.rounds[1].validator.request;
  CHECK(v1_request.size() == 2);  // system + user only
  CHECK(v1_request.back().text.find("Adjacent list:") != std::string::npos);
  // Un-purged round 2 request keeps validator history instead.
  CHECK(t.rounds[2].validator.request.size() > 2);

  CHECK(t.usage.prompt > 0);
  CHECK(t.usage.completion > 0);
}

TEST_CASE("bias rounds pass the no-community sentinel to the validator") {
  TaskInstance inst = triangle_pendant_instance();
  ScriptedBackend backend({"I cannot find any community.",
                           "Please answer with the format. Score: 0",
                           "Community: [0, 1, 2]", "Good. Score: 5"});
  DialogueConfig cfg;
  cfg.rounds = 2;
  DialogueTranscript t = run_dialogue(inst, backend, cfg, {});
  REQUIRE(t.rounds.size() == 2);
  CHECK_FALSE(t.rounds[0].solver.community.has_value());
  CHECK(t.rounds[0].validator.request.back().text.find(
            "returned no community") != std::string::npos);
  CHECK(t.rounds[1].solver.community == VertexSet{0, 1, 2});
  CHECK_FALSE(t.rounds[1].validator.purge_applied);
}

TEST_CASE("backend failure mid-dialogue aborts with partial rounds kept") {
  TaskInstance inst = triangle_pendant_instance();
  ScriptedBackend backend({"Community: [0, 1, 2]", "Fine. Score: 4"});
  DialogueConfig cfg;
  cfg.rounds = 3;
  DialogueTranscript t = run_dialogue(inst, backend, cfg, {});
  CHECK(t.aborted);
  CHECK(t.abort_reason.find("ScriptExhausted") != std::string::npos);
  REQUIRE(t.rounds.size() == 1);
  CHECK(t.rounds[0].solver.community == VertexSet{0, 1, 2});
}

TEST_CASE("transcripts round-trip through json") {
  TaskInstance inst = triangle_pendant_instance();
  ScriptedBackend backend({"Community: [0, 1]", "Needs work. Score: 1",
                           "no answer this time", "Use the format. Score: 0"});
  DialogueConfig cfg;
  cfg.rounds = 2;
  DialogueTranscript t = run_dialogue(inst, backend, cfg, {});
  t.decider = decide(t, DepthPreference::Later);
  DialogueTranscript back = transcript_from_json(transcript_to_json(t));
  CHECK(transcript_to_json(back) == transcript_to_json(t));
  CHECK(back.instance_id == t.instance_id);
  REQUIRE(back.rounds.size() == 2);
  CHECK(back.rounds[0].solver.community == VertexSet{0, 1});
  CHECK_FALSE(back.rounds[1].solver.community.has_value());
  CHECK(back.decider.selected == t.decider.selected);
  CHECK_THROWS_AS(transcript_from_json("not json"), CsError);
}

}  // TEST_SUITE
