#include "core/agent_loop.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace cs {

namespace {

std::optional<VertexSet> parse_id_list(const std::string& body, int n) {
  std::vector<int> ids;
  std::istringstream in(body);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      std::size_t pos = token.find_first_of("-0123456789");
      if (pos == std::string::npos) continue;
      int v = std::stoi(token.substr(pos));
      if (v >= 0 && v < n) ids.push_back(v);
    } catch (const std::exception&) {
      continue;
    }
  }
  if (ids.empty()) return std::nullopt;
  return make_vertex_set(std::move(ids));
}

// Standalone bracketed integer list, not an indexing expression: the
// character before '[' must not be part of an identifier or a closing
// bracket.
std::optional<std::string> last_standalone_list(const std::string& text) {
  static const std::regex list_re(
      R"(\[\s*-?\d+(?:\s*,\s*-?\d+)*\s*\])");
  std::optional<std::string> found;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), list_re);
       it != std::sregex_iterator(); ++it) {
    auto pos = static_cast<std::size_t>(it->position());
    if (pos > 0) {
      char before = text[pos - 1];
      if (std::isalnum(static_cast<unsigned char>(before)) || before == '_' ||
          before == ']' || before == '"') {
        continue;
      }
      // Adjacency-style echoes: a quoted key and colon right before the
      // list ("0": [1, 2]) describe the graph, not an answer.
      std::size_t back = pos;
      while (back > 0 && text[back - 1] == ' ') --back;
      if (back > 1 && text[back - 1] == ':' && text[back - 2] == '"') {
        continue;
      }
    }
    found = it->str();
  }
  return found;
}

}  // namespace

std::optional<VertexSet> extract_community(const std::string& text, int n) {
  static const std::regex contract_re(R"(Community:\s*\[([\d\s,]*)\])");
  // Tier 1: last contract line wins.
  std::optional<std::string> contract_body;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), contract_re);
       it != std::sregex_iterator(); ++it) {
    contract_body = (*it)[1].str();
  }
  if (contract_body) return parse_id_list(*contract_body, n);
  // Tier 2: last bracketed integer list anywhere.
  if (auto list = last_standalone_list(text)) {
    return parse_id_list(list->substr(1, list->size() - 2), n);
  }
  return std::nullopt;
}

std::optional<double> extract_score(const std::string& text) {
  static const std::regex score_re(R"([Ss]core:\s*(-?\d+(?:\.\d+)?))");
  std::optional<double> score;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), score_re);
       it != std::sregex_iterator(); ++it) {
    score = std::stod((*it)[1].str());
  }
  if (score) score = std::clamp(*score, 0.0, 5.0);
  return score;
}

namespace {

std::string format_community(const VertexSet& community) {
  std::string out = "[";
  for (std::size_t i = 0; i < community.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(community[i]);
  }
  return out + "]";
}

ChatResponse call_backend(ChatBackend& backend,
                          const std::vector<ChatMessage>& messages,
                          const DialogueConfig& cfg, TokenUsage& usage) {
  ChatRequest req;
  req.messages = messages;
  req.temperature = cfg.temperature;
  req.model_id = cfg.model_id;
  ChatResponse response = backend.complete(req);
  usage.prompt += response.usage.prompt;
  usage.completion += response.usage.completion;
  return response;
}

}  // namespace

SolverTurn solver_step(AgentState& state, const TaskInstance& inst,
                       const PromptBundle& task_prompt, int round,
                       const std::string& previous_feedback,
                       ChatBackend& backend, const DialogueConfig& cfg,
                       TokenUsage& usage) {
  std::string user_text =
      round == 0 ? task_prompt.user_prompt
                 : previous_feedback + "\n\n" + update_instruction();
  std::vector<ChatMessage> messages;
  messages.push_back({"system", state.role_prompt});
  messages.insert(messages.end(), state.memory.begin(), state.memory.end());
  messages.push_back({"user", user_text});

  ChatResponse response = call_backend(backend, messages, cfg, usage);

  SolverTurn turn;
  turn.round = round;
  turn.request = messages;
  turn.raw_text = response.text;
  turn.community = extract_community(response.text, inst.graph.vertex_count());

  state.memory.push_back({"user", user_text});
  state.memory.push_back({"assistant", response.text});
  return turn;
}

ValidatorTurn validator_step(AgentState& state, const TaskInstance& inst,
                             const std::optional<VertexSet>& community,
                             int round, bool purge_applied,
                             ChatBackend& backend, const DialogueConfig& cfg,
                             TokenUsage& usage) {
  std::ostringstream user;
  if (state.memory.empty()) {
    // Fresh memory (first round or just purged): restate the task context.
    user << metric_definition({inst.metric, inst.k}) << '\n'
         << verbalize_graph(inst.graph, inst.query) << '\n';
  }
  if (community) {
    user << "Candidate community (round " << round
         << "): " << format_community(*community) << '\n';
  } else {
    user << "The solver returned no community this round. Tell it to answer "
            "with the required format.\n";
  }
  user << validation_instruction();

  std::vector<ChatMessage> messages;
  messages.push_back({"system", state.role_prompt});
  messages.insert(messages.end(), state.memory.begin(), state.memory.end());
  messages.push_back({"user", user.str()});

  ChatResponse response = call_backend(backend, messages, cfg, usage);

  ValidatorTurn turn;
  turn.round = round;
  turn.request = messages;
  turn.raw_text = response.text;
  turn.feedback = response.text;
  turn.score = extract_score(response.text);
  turn.purge_applied = purge_applied;

  state.memory.push_back({"user", user.str()});
  state.memory.push_back({"assistant", response.text});
  return turn;
}

DialogueTranscript run_dialogue(const TaskInstance& inst, ChatBackend& backend,
                                const DialogueConfig& cfg,
                                const std::vector<Exemplar>& exemplars) {
  if (cfg.rounds < 1) {
    throw CsError(ErrorCode::ConfigInvalid, "rounds must be >= 1");
  }
  DialogueTranscript transcript;
  transcript.instance_id = inst.instance_id;
  transcript.config = cfg;

  std::mt19937_64 rng(cfg.seed);
  PromptBundle task_prompt = build_prompt(inst, cfg.method, exemplars, rng);

  AgentState solver{"solver", solver_role_prompt(), {}};
  AgentState validator{"validator", validator_role_prompt(), {}};

  std::string feedback;
  std::optional<VertexSet> previous_community;
  for (int round = 0; round < cfg.rounds; ++round) {
    DialogueRound record;
    try {
      record.solver = solver_step(solver, inst, task_prompt, round, feedback,
                                  backend, cfg, transcript.usage);

      bool purge = round > 0 && record.solver.community &&
                   previous_community &&
                   *record.solver.community == *previous_community;
      if (purge) validator.memory.clear();

      record.validator =
          validator_step(validator, inst, record.solver.community, round,
                         purge, backend, cfg, transcript.usage);
    } catch (const CsError& e) {
      transcript.aborted = true;
      transcript.abort_reason = e.what();
      break;
    }
    feedback = record.validator.feedback;
    previous_community = record.solver.community;
    transcript.rounds.push_back(std::move(record));
  }
  return transcript;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json messages_to_json(const std::vector<ChatMessage>& messages) {
  ordered_json out = ordered_json::array();
  for (const auto& msg : messages) {
    out.push_back({{"role", msg.role}, {"text", msg.text}});
  }
  return out;
}

std::vector<ChatMessage> messages_from_json(const ordered_json& j) {
  std::vector<ChatMessage> out;
  for (const auto& msg : j) {
    out.push_back({msg.at("role").get<std::string>(),
                   msg.at("text").get<std::string>()});
  }
  return out;
}

}  // namespace

std::string transcript_to_json(const DialogueTranscript& transcript) {
  ordered_json j;
  j["instance_id"] = transcript.instance_id;
  j["config"] = {{"rounds", transcript.config.rounds},
                 {"method", prompt_method_name(transcript.config.method)},
                 {"temperature", transcript.config.temperature},
                 {"model_id", transcript.config.model_id},
                 {"seed", transcript.config.seed}};
  ordered_json rounds = ordered_json::array();
  for (const auto& round : transcript.rounds) {
    ordered_json r;
    r["round"] = round.solver.round;
    r["solver"] = {
        {"request", messages_to_json(round.solver.request)},
        {"raw_text", round.solver.raw_text},
        {"community", round.solver.community
                          ? ordered_json(*round.solver.community)
                          : ordered_json(nullptr)},
        {"bias", !round.solver.community.has_value()}};
    r["validator"] = {
        {"request", messages_to_json(round.validator.request)},
        {"raw_text", round.validator.raw_text},
        {"score", round.validator.score ? ordered_json(*round.validator.score)
                                        : ordered_json(nullptr)},
        {"purge_applied", round.validator.purge_applied}};
    rounds.push_back(std::move(r));
  }
  j["rounds"] = std::move(rounds);
  j["decider"] = {
      {"selected", transcript.decider.selected
                       ? ordered_json(*transcript.decider.selected)
                       : ordered_json(nullptr)},
      {"criterion", transcript.decider.criterion},
      {"depth_preference", transcript.decider.depth_preference}};
  j["aborted"] = transcript.aborted;
  j["abort_reason"] = transcript.abort_reason;
  j["usage"] = {{"prompt", transcript.usage.prompt},
                {"completion", transcript.usage.completion}};
  return j.dump(2);
}

DialogueTranscript transcript_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw CsError(ErrorCode::MalformedRecord,
                  std::string("bad transcript json: ") + e.what());
  }
  DialogueTranscript t;
  t.instance_id = j.at("instance_id").get<std::string>();
  t.config.rounds = j.at("config").at("rounds").get<int>();
  t.config.method =
      parse_prompt_method(j.at("config").at("method").get<std::string>());
  t.config.temperature = j.at("config").at("temperature").get<double>();
  t.config.model_id = j.at("config").at("model_id").get<std::string>();
  t.config.seed = j.at("config").at("seed").get<std::uint64_t>();
  for (const auto& r : j.at("rounds")) {
    DialogueRound round;
    round.solver.round = r.at("round").get<int>();
    round.solver.request = messages_from_json(r.at("solver").at("request"));
    round.solver.raw_text = r.at("solver").at("raw_text").get<std::string>();
    if (!r.at("solver").at("community").is_null()) {
      round.solver.community =
          r.at("solver").at("community").get<std::vector<int>>();
    }
    round.validator.round = round.solver.round;
    round.validator.request =
        messages_from_json(r.at("validator").at("request"));
    round.validator.raw_text =
        r.at("validator").at("raw_text").get<std::string>();
    round.validator.feedback = round.validator.raw_text;
    if (!r.at("validator").at("score").is_null()) {
      round.validator.score = r.at("validator").at("score").get<double>();
    }
    round.validator.purge_applied =
        r.at("validator").at("purge_applied").get<bool>();
    t.rounds.push_back(std::move(round));
  }
  if (!j.at("decider").at("selected").is_null()) {
    t.decider.selected = j.at("decider").at("selected").get<std::vector<int>>();
  }
  t.decider.criterion = j.at("decider").at("criterion").get<std::string>();
  t.decider.depth_preference =
      j.at("decider").at("depth_preference").get<std::string>();
  t.aborted = j.at("aborted").get<bool>();
  t.abort_reason = j.at("abort_reason").get<std::string>();
  t.usage.prompt = j.at("usage").at("prompt").get<long long>();
  t.usage.completion = j.at("usage").at("completion").get<long long>();
  return t;
}

}  // namespace cs
