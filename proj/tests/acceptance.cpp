// Acceptance gate: one pass/fail line per criterion, exit code = #failures.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/decider.hpp"
#include "core/eval.hpp"
#include "core/generators.hpp"
#include "core/oracles.hpp"
#include "core/prompting.hpp"

using namespace cs;

namespace {

int g_failures = 0;
int g_index = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  ++g_index;
  std::printf("[%s] %2d. %s%s%s\n", ok ? "PASS" : "FAIL", g_index,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (unit(rng) < p) edges.emplace_back(u, v);
    }
  }
  return Graph::build(n, edges);
}

// Maximum k-truss edge set of g: peel edges with support < k-2 to fixpoint.
std::vector<std::pair<int, int>> truss_fixpoint(const Graph& g, int k) {
  std::set<std::pair<int, int>> alive;
  for (auto e : g.edges()) alive.insert(e);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = alive.begin(); it != alive.end();) {
      auto [u, v] = *it;
      int support = 0;
      for (int w : g.neighbors(u)) {
        auto a = std::minmax(w, u);
        auto b = std::minmax(w, v);
        if (alive.count({a.first, a.second}) &&
            alive.count({b.first, b.second})) {
          ++support;
        }
      }
      if (support < k - 2) {
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return {alive.begin(), alive.end()};
}

bool satisfies_metric(const Graph& g, const VertexSet& s, int q,
                      const Metric& metric) {
  if (s.empty()) return true;  // empty means "no community"; nothing to check
  if (!set_contains(s, q)) return false;
  auto sub = g.induced(s);
  if (!sub.graph.is_connected()) return false;
  switch (metric.kind) {
    case MetricKind::Core:
      for (int v = 0; v < sub.graph.vertex_count(); ++v) {
        if (sub.graph.degree(v) < metric.k) return false;
      }
      return true;
    case MetricKind::Truss: {
      auto kept = truss_fixpoint(sub.graph, metric.k);
      std::vector<char> touched(sub.graph.vertex_count(), 0);
      for (auto [u, v] : kept) touched[u] = touched[v] = 1;
      if (sub.graph.vertex_count() > 1) {
        for (char t : touched) {
          if (!t) return false;  // the truss must span the community
        }
      }
      Graph truss_graph = Graph::build(sub.graph.vertex_count(), kept);
      return sub.graph.vertex_count() == 1 || truss_graph.is_connected();
    }
    case MetricKind::Clique:
      if (static_cast<int>(s.size()) < metric.k) return false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
          if (!g.has_edge(s[i], s[j])) return false;
        }
      }
      return true;
    case MetricKind::Ecc:
      if (s.size() == 1) return true;
      return global_min_cut(sub.graph).value >= metric.k;
  }
  return false;
}

void criterion_oracle_equivalence() {
  const MetricKind kinds[] = {MetricKind::Core, MetricKind::Truss,
                              MetricKind::Clique, MetricKind::Ecc};
  std::mt19937_64 rng(0xACCE01);
  auto start = std::chrono::steady_clock::now();
  long long mismatches = 0, checks = 0;
  for (MetricKind kind : kinds) {
    for (int trial = 0; trial < 500; ++trial) {
      int n = 4 + static_cast<int>(rng() % 7);  // 4..10
      double p = 0.25 + 0.5 * (rng() % 100) / 100.0;
      Graph g = random_graph(n, p, rng);
      int q = static_cast<int>(rng() % n);
      for (int k = 2; k <= 4; ++k) {
        if (kind == MetricKind::Truss && k < 3) continue;
        Metric metric{kind, k};
        ++checks;
        if (oracle_community(g, q, metric) !=
            brute_force_community(g, q, metric)) {
          ++mismatches;
        }
      }
    }
  }
  double seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "%lld checks, %lld mismatches, %.1fs", checks, mismatches,
                seconds);
  report("fast oracles match the exponential reference",
         mismatches == 0 && seconds < 120.0, detail);
}

void criterion_definitional() {
  std::mt19937_64 rng(0xACCE02);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 5 + static_cast<int>(rng() % 31);  // 5..35
    double p = 2.5 / n + (rng() % 100) / 100.0 * 0.25;
    Graph g = random_graph(n, p, rng);
    int q = static_cast<int>(rng() % n);
    MetricKind kind = static_cast<MetricKind>(rng() % 4);
    int k = 2 + static_cast<int>(rng() % 3);
    if (kind == MetricKind::Truss) k = std::max(k, 3);
    VertexSet community = oracle_community(g, q, {kind, k});
    if (!satisfies_metric(g, community, q, {kind, k})) ++bad;
    // Monotone containment: the k+1 community nests inside the k one.
    VertexSet tighter = oracle_community(g, q, {kind, k + 1});
    if (!is_subset(tighter, community)) ++bad;
  }
  report("oracle outputs satisfy their definitions and nest in k", bad == 0,
         bad ? std::to_string(bad) + " violations" : "1000 instances clean");
}

void criterion_psg_stats() {
  double edge_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    PsgParams params;
    params.n = 10;
    params.dense_size = 6;
    params.seed = seed;
    edge_sum += static_cast<double>(generate_psg(params).graph.edge_count());
  }
  double mean_e = edge_sum / 1000.0;
  bool edges_ok = mean_e >= 18.0 * 0.97 && mean_e <= 18.0 * 1.03;

  DatasetSpec spec;
  spec.dataset = DatasetKind::Psg;
  spec.tiers = {Difficulty::Easy};
  spec.per_tier_per_metric = 150;
  spec.base_seed = 0xACCE03;
  DatasetResult result = generate_dataset(spec);
  double vh_sum = 0.0;
  int vh_n = 0;
  for (const auto& row : result.manifest) {
    vh_sum += row.mean_vh * row.count;
    vh_n += row.count;
  }
  double mean_vh = vh_sum / vh_n;
  bool vh_ok = mean_vh >= 6.1 - 1.5 && mean_vh <= 6.1 + 1.5;

  char detail[128];
  std::snprintf(detail, sizeof(detail), "mean |E|=%.3f, mean |V_H|=%.2f",
                mean_e, mean_vh);
  report("planted-subgraph statistics match expectation", edges_ok && vh_ok,
         detail);
}

void criterion_lfr_stats() {
  double mixing_sum = 0.0;
  int disconnected = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    LfrParams params;
    params.seed = seed;
    LfrResult r = generate_lfr(params);
    mixing_sum += r.realized_mixing;
    if (!r.graph.is_connected()) ++disconnected;
  }
  double mean_mixing = mixing_sum / 200.0;
  char detail[96];
  std::snprintf(detail, sizeof(detail), "mean mixing=%.4f, disconnected=%d",
                mean_mixing, disconnected);
  report("lfr generator hits its mixing target and stays connected",
         mean_mixing >= 0.05 && mean_mixing <= 0.15 && disconnected == 0,
         detail);
}

void criterion_verbalization() {
  std::mt19937_64 rng(0xACCE05);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng() % 30);
    Graph g = random_graph(n, 0.1 + (rng() % 80) / 100.0, rng);
    int q = static_cast<int>(rng() % n);
    ParsedVerbalization parsed = parse_verbalization(verbalize_graph(g, q));
    if (parsed.query != q || parsed.n != n || parsed.edges != g.edges()) ++bad;
  }
  Graph triangle = Graph::build(3, {{0, 1}, {0, 2}, {1, 2}});
  const std::string expected =
      "Query node: 0\nNodes are numbered from 0 to 2.\n"
      "Adjacent list: {\"0\": [1, 2], \"1\": [0, 2], \"2\": [0, 1]}";
  bool exact = verbalize_graph(triangle, 0) == expected;
  report("verbalization round-trips and matches the template byte for byte",
         bad == 0 && exact,
         bad ? std::to_string(bad) + " round-trip failures" : "");
}

void criterion_golden_pipeline() {
  TaskInstance inst;
  inst.instance_id = "golden-1";
  inst.dataset = DatasetKind::Psg;
  inst.difficulty = Difficulty::Easy;
  inst.metric = MetricKind::Core;
  inst.k = 2;
  inst.query = 0;
  inst.graph = Graph::build(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  inst.ground_truth = {0, 1, 2};

  ScriptedBackend backend(
      {"Community: [0, 1]",                         // round 0: wrong
       "Node 0 lacks support in this set. Score: 2",
       "Community: [0, 1, 2]",                      // round 1: the truth
       "Every node has degree 2 inside. Score: 5",
       "Community: [0, 1, 2]",                      // round 2: repeat
       "Still correct. Score: 5"});
  auto dir = std::filesystem::temp_directory_path() / "cs-acceptance-golden";
  std::filesystem::remove_all(dir);
  HarnessConfig cfg;
  cfg.rounds = 3;
  cfg.parallelism = 1;
  cfg.transcripts_dir = dir.string();
  RunOutcome out = run_cs_agent({inst}, backend, cfg);

  bool ok = out.records.size() == 1 && out.records[0].f1 == 1.0 &&
            !out.records[0].bias;
  std::string detail;
  std::ifstream in(dir / "golden-1.json");
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (!ok) detail = "f1 or record shape wrong";
  if (ok) {
    DialogueTranscript t = transcript_from_json(buffer.str());
    bool purge_pattern = t.rounds.size() == 3 &&
                         !t.rounds[0].validator.purge_applied &&
                         !t.rounds[1].validator.purge_applied &&
                         t.rounds[2].validator.purge_applied;
    // Post-purge request must carry no earlier validator messages.
    bool fresh_request = t.rounds[2].validator.request.size() == 2 &&
                         t.rounds[2].validator.request.back().text.find(
                             "Adjacent list:") != std::string::npos;
    bool footer = t.decider.criterion == "avg_score" &&
                  t.decider.selected == VertexSet{0, 1, 2};
    ok = purge_pattern && fresh_request && footer;
    if (!purge_pattern) detail = "purge fired at the wrong round";
    else if (!fresh_request) detail = "purged request kept old messages";
    else if (!footer) detail = "decider footer/selection wrong";
  }
  std::filesystem::remove_all(dir);
  report("golden dialogue: exact answer, single purge, avg_score footer", ok,
         detail);
}

void criterion_decider() {
  auto make = [](std::vector<std::pair<std::optional<VertexSet>, double>>
                     rounds) {
    DialogueTranscript t;
    int i = 0;
    for (auto& [community, score] : rounds) {
      DialogueRound r;
      r.solver.round = i;
      r.solver.community = community;
      r.validator.score = score;
      t.rounds.push_back(std::move(r));
      ++i;
    }
    return t;
  };
  bool ok = true;
  for (DepthPreference pref : {DepthPreference::Later, DepthPreference::Earlier}) {
    auto score_win = decide(
        make({{VertexSet{0, 1}, 2.0}, {VertexSet{2, 3}, 5.0}}), pref);
    ok = ok && score_win.selected == VertexSet{2, 3} &&
         score_win.criterion == "avg_score";
    auto freq_win = decide(make({{VertexSet{0, 1}, 3.0},
                                 {VertexSet{2, 3}, 3.0},
                                 {VertexSet{0, 1}, 3.0}}),
                           pref);
    ok = ok && freq_win.selected == VertexSet{0, 1} &&
         freq_win.criterion == "frequency";
    auto depth_win = decide(
        make({{VertexSet{0, 1}, 3.0}, {VertexSet{2, 3}, 3.0}}), pref);
    VertexSet expected =
        pref == DepthPreference::Later ? VertexSet{2, 3} : VertexSet{0, 1};
    ok = ok && depth_win.selected == expected && depth_win.criterion == "depth";
  }

  // Permutation invariance over 10^4 shuffles of random profile lists.
  std::mt19937_64 rng(0xACCE07);
  for (int fixture = 0; fixture < 100 && ok; ++fixture) {
    std::vector<CandidateProfile> profiles;
    int count = 2 + static_cast<int>(rng() % 6);
    for (int i = 0; i < count; ++i) {
      CandidateProfile p;
      p.community = {i, i + 1 + static_cast<int>(rng() % 3)};
      p.avg_score = static_cast<double>(rng() % 3);
      p.frequency = 1 + static_cast<int>(rng() % 2);
      p.first_round = static_cast<int>(rng() % 4);
      profiles.push_back(std::move(p));
    }
    Selection reference = select(profiles, DepthPreference::Later);
    for (int shuffle = 0; shuffle < 100; ++shuffle) {
      std::shuffle(profiles.begin(), profiles.end(), rng);
      Selection again = select(profiles, DepthPreference::Later);
      if (again.community != reference.community ||
          again.criterion != reference.criterion) {
        ok = false;
        break;
      }
    }
  }
  report("decider fixtures and permutation invariance", ok);
}

void criterion_majority_vote() {
  bool fixture_ok =
      majority_vote({VertexSet{0, 1}, VertexSet{0, 2}, VertexSet{0, 1, 3}}) ==
      VertexSet{0, 1};

  // Independent reference: count per vertex with plain arrays.
  std::mt19937_64 rng(0xACCE08);
  bool random_ok = true;
  for (int trial = 0; trial < 10000 && random_ok; ++trial) {
    int k = 1 + static_cast<int>(rng() % 6);
    int n = 1 + static_cast<int>(rng() % 8);
    std::vector<std::optional<VertexSet>> candidates;
    std::vector<int> counts(n, 0);
    for (int c = 0; c < k; ++c) {
      if (rng() % 5 == 0) {
        candidates.push_back(std::nullopt);
        continue;
      }
      std::vector<int> picks;
      for (int v = 0; v < n; ++v) {
        if (rng() % 2) picks.push_back(v);
      }
      for (int v : picks) counts[v] += 1;
      candidates.push_back(make_vertex_set(picks));
    }
    VertexSet expected;
    for (int v = 0; v < n; ++v) {
      if (2 * counts[v] >= k) expected.push_back(v);
    }
    if (majority_vote(candidates) != expected) random_ok = false;
  }
  report("self-consistency vote matches the reference counter",
         fixture_ok && random_ok);
}

void criterion_bias_detection() {
  const int n = 20;
  std::vector<std::string> bias_cases = {
      "def find_community(adj, q):\n    seen = set()\n    stack = [q]\n"
      "    while stack:\n        v = stack.pop()\n        seen.add(v)\n"
      "    return seen",
      "for v in range(n):\n    if deg[v] >= k:\n        keep.add(v)",
      "result = bfs(adj, query)\nprint(result)",
      "while queue:\n    u = queue.popleft()\n    visited[u] = True",
      "community = [v for v in nodes if degree(v) >= k]",
      "graph.neighbors(q) gives the candidates; filter by degree and "
      "return the closure.",
      "Here is the algorithm: peel vertices of degree below k, then take "
      "the connected component of the query.",
      "int main() { std::vector<int> ans; ans.push_back(q); return 0; }",
      "Sorry, I can only describe the procedure, not run it.",
      "adj[0] and adj[3] must both be inspected before deciding."};
  std::vector<std::string> answer_cases = {
      "Community: [0, 1, 2]",
      "After peeling, the stable set remains.\nCommunity: [3, 4, 5]",
      "Community: [ 7 , 2 ]",
      "Reasoning first... final answer below.\nCommunity: [0, 19]",
      "Community: [1]",
      "Community: [10, 11, 12, 13]",
      "Step by step: drop 4, keep the rest. Community: [0, 2, 6]",
      "I verified each degree.\nCommunity: [5, 6, 7, 8, 9]",
      "Community: [18, 17, 16]",
      "final line follows\nCommunity: [2, 3]"};
  int false_flags = 0, missed_flags = 0;
  for (const auto& text : bias_cases) {
    if (extract_community(text, n).has_value()) ++missed_flags;
  }
  for (const auto& text : answer_cases) {
    if (!extract_community(text, n).has_value()) ++false_flags;
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "missed=%d false=%d over %zu+%zu fixtures", missed_flags,
                false_flags, bias_cases.size(), answer_cases.size());
  report("bias flagging separates code-only replies from answers",
         missed_flags == 0 && false_flags == 0, detail);
}

std::string pipeline_pass(const std::filesystem::path& root) {
  DatasetSpec spec;
  spec.dataset = DatasetKind::Psg;
  spec.tiers = {Difficulty::Easy, Difficulty::Medium};
  spec.metrics = {MetricKind::Core, MetricKind::Clique};
  spec.per_tier_per_metric = 5;
  spec.base_seed = 0xACCE10;
  DatasetResult data = generate_dataset(spec);
  std::filesystem::create_directories(root);
  std::string data_path = (root / "data.jsonl").string();
  write_dataset(data, data_path, (root / "manifest.json").string());

  std::vector<TaskInstance> instances = read_dataset_file(data_path);
  ScriptedBackend backend(
      {}, {{"Candidate community", "Believable. Score: 4"}},
      "Community: [0, 1, 2]");
  HarnessConfig cfg;
  cfg.rounds = 2;
  cfg.parallelism = 3;
  cfg.seed = 7;
  RunOutcome out = run_cs_agent(instances, backend, cfg);
  return report_to_csv(aggregate_report(out.records));
}

void criterion_determinism() {
  auto root = std::filesystem::temp_directory_path() / "cs-acceptance-e2e";
  std::filesystem::remove_all(root);
  std::string first = pipeline_pass(root / "a");
  std::string second = pipeline_pass(root / "b");
  // The dataset files themselves must also be byte-identical.
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  bool data_same =
      slurp(root / "a" / "data.jsonl") == slurp(root / "b" / "data.jsonl");
  std::filesystem::remove_all(root);
  report("generate + run + report is byte-deterministic",
         !first.empty() && first == second && data_same);
}

}  // namespace

int main() {
  criterion_oracle_equivalence();
  criterion_definitional();
  criterion_psg_stats();
  criterion_lfr_stats();
  criterion_verbalization();
  criterion_golden_pipeline();
  criterion_decider();
  criterion_majority_vote();
  criterion_bias_detection();
  criterion_determinism();
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
