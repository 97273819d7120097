#include "core/prompting.hpp"

#include <regex>
#include <sstream>

namespace cs {

const char* const kPromptTemplateVersion = "v1";

const char* prompt_method_name(PromptMethod m) {
  switch (m) {
    case PromptMethod::ZeroShot: return "zero-shot";
    case PromptMethod::FewShot: return "few-shot";
    case PromptMethod::ZeroCoT: return "0-cot";
  }
  return "?";
}

PromptMethod parse_prompt_method(const std::string& s) {
  if (s == "zero-shot") return PromptMethod::ZeroShot;
  if (s == "few-shot") return PromptMethod::FewShot;
  if (s == "0-cot") return PromptMethod::ZeroCoT;
  throw CsError(ErrorCode::ConfigInvalid, "unknown prompting method '" + s + "'");
}

std::string verbalize_graph(const Graph& g, int q) {
  if (!g.contains(q)) {
    throw CsError(ErrorCode::VertexNotInGraph, "vertex " + std::to_string(q));
  }
  std::ostringstream out;
  out << "Query node: " << q << '\n';
  out << "Nodes are numbered from 0 to " << g.vertex_count() - 1 << ".\n";
  out << "Adjacent list: {";
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (v > 0) out << ", ";
    out << '"' << v << "\": [";
    const auto& nbrs = g.neighbors(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (i > 0) out << ", ";
      out << nbrs[i];
    }
    out << ']';
  }
  out << '}';
  return out.str();
}

ParsedVerbalization parse_verbalization(const std::string& text) {
  ParsedVerbalization parsed;
  std::smatch m;
  if (!std::regex_search(text, m, std::regex(R"(Query node: (\d+))"))) {
    throw CsError(ErrorCode::MalformedRecord, "missing query line");
  }
  parsed.query = std::stoi(m[1]);
  if (!std::regex_search(text, m,
                         std::regex(R"(Nodes are numbered from 0 to (\d+)\.)"))) {
    throw CsError(ErrorCode::MalformedRecord, "missing node range line");
  }
  parsed.n = std::stoi(m[1]) + 1;
  auto brace = text.find("Adjacent list: {");
  if (brace == std::string::npos) {
    throw CsError(ErrorCode::MalformedRecord, "missing adjacency line");
  }
  std::string adjacency = text.substr(brace);
  std::regex entry(R"re("(\d+)": \[([0-9, ]*)\])re");
  for (auto it = std::sregex_iterator(adjacency.begin(), adjacency.end(), entry);
       it != std::sregex_iterator(); ++it) {
    int u = std::stoi((*it)[1]);
    std::istringstream list((*it)[2]);
    std::string token;
    while (std::getline(list, token, ',')) {
      if (token.find_first_of("0123456789") == std::string::npos) continue;
      int v = std::stoi(token);
      if (u < v) parsed.edges.emplace_back(u, v);
    }
  }
  return parsed;
}

namespace {

std::string plural(int count, const char* unit) {
  return std::to_string(count) + " " + unit + (count == 1 ? "" : "s");
}

}  // namespace

std::string metric_definition(const Metric& metric) {
  const int k = metric.k;
  switch (metric.kind) {
    case MetricKind::Core:
      return "Metric definition (" + std::to_string(k) +
             "-core): a subgraph in which each vertex's degree is at least " +
             std::to_string(k) + " within the subgraph.";
    case MetricKind::Truss:
      return "Metric definition (" + std::to_string(k) +
             "-truss): a subgraph in which every edge is contained in at "
             "least " +
             plural(k - 2, "triangle") + " within the subgraph.";
    case MetricKind::Clique:
      return "Metric definition (" + std::to_string(k) +
             "-clique): a set of at least " + std::to_string(k) +
             " vertices such that each pair of vertices has an edge.";
    case MetricKind::Ecc:
      return "Metric definition (" + std::to_string(k) +
             "-edge-connected component): a subgraph such that after "
             "removing any " +
             plural(k - 1, "edge") + ", it is still connected.";
  }
  return "";
}

std::string solver_role_prompt() {
  return "You are a community search analyst. Given the textual description "
         "of an undirected graph, a query node, and a cohesiveness metric, "
         "you identify the community of the query node: a connected group of "
         "nodes containing the query node that satisfies the metric. You "
         "always finish with the required answer line.";
}

std::string validator_role_prompt() {
  return "You are a community search reviewer. Given the textual description "
         "of an undirected graph, a cohesiveness metric, and a candidate "
         "community, you check every node against the metric's structural "
         "requirements, point out concrete problems (for example a node with "
         "too few internal connections), suggest fixes, and grade the "
         "candidate.";
}

std::string task_instruction(const Metric& metric) {
  return "Task: find the community of the query node, i.e. a connected set "
         "of nodes containing the query node that satisfies the " +
         std::to_string(metric.k) + "-" +
         std::string(metric_kind_name(metric.kind)) +
         " requirement above. Return the largest such community.";
}

std::string update_instruction() {
  return "Revise your community using the feedback above. Keep the query "
         "node, fix every reported violation, and return the improved "
         "community. " + answer_contract_line();
}

std::string validation_instruction() {
  return "Check each node of the candidate community against the metric "
         "definition, report concrete violations and suggested fixes, then "
         "grade the candidate. " + score_contract_line();
}

std::string answer_contract_line() {
  return "End your reply with exactly one line: Community: [v1, v2, ...]";
}

std::string score_contract_line() {
  return "End your reply with exactly one line: Score: <a number from 0 to "
         "5>";
}

std::string step_by_step_cue() { return "Let's think step by step."; }

namespace {

Exemplar make_exemplar(const char* id, MetricKind kind, int k, int q, int n,
                       std::vector<std::pair<int, int>> edges,
                       VertexSet truth, const std::string& reasoning) {
  Exemplar ex;
  ex.id = id;
  ex.instance.instance_id = id;
  ex.instance.metric = kind;
  ex.instance.k = k;
  ex.instance.query = q;
  ex.instance.graph = Graph::build(n, edges);
  ex.instance.ground_truth = truth;
  std::string answer = "Community: [";
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (i > 0) answer += ", ";
    answer += std::to_string(truth[i]);
  }
  answer += "]";
  ex.worked_answer = reasoning + "\n" + answer;
  return ex;
}

}  // namespace

std::vector<Exemplar> default_exemplar_pool() {
  std::vector<Exemplar> pool;
  pool.push_back(make_exemplar(
      "ex-core-1", MetricKind::Core, 2, 0, 4,
      {{0, 1}, {0, 2}, {1, 2}, {2, 3}}, {0, 1, 2},
      "Nodes 0, 1 and 2 form a triangle, so each has 2 neighbors inside the "
      "set. Node 3 has only 1 neighbor and must be dropped."));
  pool.push_back(make_exemplar(
      "ex-core-2", MetricKind::Core, 3, 1, 4,
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {0, 1, 2, 3},
      "The graph is complete on 4 nodes, so every node has degree 3 inside "
      "the full set."));
  pool.push_back(make_exemplar(
      "ex-truss-1", MetricKind::Truss, 4, 0, 4,
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {0, 1, 2, 3},
      "Every edge of the complete 4-node graph lies in 2 triangles, which "
      "meets the requirement of at least 2."));
  pool.push_back(make_exemplar(
      "ex-truss-2", MetricKind::Truss, 3, 0, 5,
      {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}, {0, 1, 2, 3, 4},
      "Each edge belongs to one of the two triangles through node 2, so "
      "every edge sits in at least 1 triangle and the set is connected."));
  pool.push_back(make_exemplar(
      "ex-clique-1", MetricKind::Clique, 3, 0, 3, {{0, 1}, {0, 2}, {1, 2}},
      {0, 1, 2},
      "Nodes 0, 1 and 2 are pairwise adjacent, giving a clique of size 3."));
  pool.push_back(make_exemplar(
      "ex-clique-2", MetricKind::Clique, 4, 0, 5,
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 4}}, {0, 1, 2, 3},
      "Nodes 0-3 are pairwise adjacent. Node 4 connects only to node 0, so "
      "the largest clique through node 0 is {0, 1, 2, 3}."));
  pool.push_back(make_exemplar(
      "ex-ecc-1", MetricKind::Ecc, 2, 0, 4,
      {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, {0, 1, 2, 3},
      "The 4-cycle stays connected after removing any single edge, so the "
      "whole cycle qualifies."));
  pool.push_back(make_exemplar(
      "ex-ecc-2", MetricKind::Ecc, 2, 0, 6,
      {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}}, {0, 1, 2},
      "The bridge between the two triangles disconnects the graph when "
      "removed, so only the triangle containing node 0 survives."));
  return pool;
}

PromptBundle build_prompt(const TaskInstance& inst, PromptMethod method,
                          const std::vector<Exemplar>& exemplars,
                          std::mt19937_64& rng) {
  PromptBundle bundle;
  bundle.method = method;
  bundle.system_role = solver_role_prompt();

  Metric metric{inst.metric, inst.k};
  std::ostringstream user;
  user << metric_definition(metric) << "\n\n";

  if (method == PromptMethod::FewShot) {
    if (exemplars.empty()) {
      throw CsError(ErrorCode::EmptyExemplarPool, "few-shot needs exemplars");
    }
    std::uniform_int_distribution<std::size_t> pick(0, exemplars.size() - 1);
    const Exemplar& ex = exemplars[pick(rng)];
    bundle.exemplar_id = ex.id;
    Metric ex_metric{ex.instance.metric, ex.instance.k};
    user << "Here is a worked example.\n"
         << metric_definition(ex_metric) << '\n'
         << verbalize_graph(ex.instance.graph, ex.instance.query) << '\n'
         << ex.worked_answer << "\n\nNow solve the following task.\n";
  }

  user << verbalize_graph(inst.graph, inst.query) << '\n'
       << task_instruction(metric) << '\n';
  if (method == PromptMethod::ZeroCoT) {
    user << step_by_step_cue() << '\n';
  }
  user << answer_contract_line();
  bundle.user_prompt = user.str();
  return bundle;
}

}  // namespace cs
