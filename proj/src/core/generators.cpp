#include "core/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>

#include <json.hpp>

#include "core/oracles.hpp"

namespace cs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index) {
  return splitmix64(base ^ splitmix64(stream * 0x100000001b3ULL + index));
}

// Draw `count` distinct ids from 0..n-1 (partial Fisher-Yates).
VertexSet sample_vertices(int n, int count, std::mt19937_64& rng) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  return make_vertex_set(std::move(pool));
}

int power_law_draw(int lo, int hi, double exponent, std::mt19937_64& rng) {
  std::vector<double> weights;
  weights.reserve(hi - lo + 1);
  for (int v = lo; v <= hi; ++v) {
    weights.push_back(std::pow(static_cast<double>(v), -exponent));
  }
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double target = unit(rng) * total;
  double acc = 0.0;
  for (int v = lo; v <= hi; ++v) {
    acc += weights[v - lo];
    if (target <= acc) return v;
  }
  return hi;
}

double power_law_mean(int lo, int hi, double exponent) {
  double num = 0.0, den = 0.0;
  for (int v = lo; v <= hi; ++v) {
    double w = std::pow(static_cast<double>(v), -exponent);
    num += v * w;
    den += w;
  }
  return num / den;
}

int stochastic_round(double x, std::mt19937_64& rng) {
  double floor_part = std::floor(x);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return static_cast<int>(floor_part) + (unit(rng) < x - floor_part ? 1 : 0);
}

}  // namespace

PsgResult generate_psg(const PsgParams& params) {
  if (params.n < 2 || params.dense_size < 2 || params.dense_size > params.n ||
      params.p_sparse < 0.0 || params.p_dense > 1.0 ||
      params.p_sparse > params.p_dense) {
    throw CsError(ErrorCode::InvalidParams, "bad PSG parameters");
  }
  std::mt19937_64 rng(params.seed);
  VertexSet dense = sample_vertices(params.n, params.dense_size, rng);
  std::vector<char> in_dense(params.n, 0);
  for (int v : dense) in_dense[v] = 1;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < params.n; ++u) {
    for (int v = u + 1; v < params.n; ++v) {
      double p = (in_dense[u] && in_dense[v]) ? params.p_dense : params.p_sparse;
      if (unit(rng) < p) edges.emplace_back(u, v);
    }
  }
  return {Graph::build(params.n, edges), std::move(dense)};
}

namespace {

struct LfrDraft {
  std::set<std::pair<int, int>> edges;
  std::vector<int> community_of;  // vertex -> community index
  std::vector<VertexSet> partition;
};

// Pair stubs uniformly; a pair is valid when accept(u,v) holds and the edge
// is new. Unmatchable stubs are dropped after a few reshuffle passes.
void match_stubs(std::vector<int> stubs, std::mt19937_64& rng,
                 std::set<std::pair<int, int>>& edges,
                 const std::function<bool(int, int)>& accept) {
  for (int pass = 0; pass < 24 && stubs.size() >= 2; ++pass) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<int> leftover;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      auto edge = std::minmax(u, v);
      if (u == v || !accept(u, v) || edges.count({edge.first, edge.second})) {
        leftover.push_back(u);
        leftover.push_back(v);
      } else {
        edges.insert({edge.first, edge.second});
      }
    }
    if (stubs.size() % 2) leftover.push_back(stubs.back());
    if (leftover.size() == stubs.size()) break;
    stubs = std::move(leftover);
  }
}

double realized_mixing(const LfrDraft& draft, int n) {
  std::vector<int> deg(n, 0), ext(n, 0);
  for (auto [u, v] : draft.edges) {
    ++deg[u];
    ++deg[v];
    if (draft.community_of[u] != draft.community_of[v]) {
      ++ext[u];
      ++ext[v];
    }
  }
  double sum = 0.0;
  int counted = 0;
  for (int v = 0; v < n; ++v) {
    if (deg[v] > 0) {
      sum += static_cast<double>(ext[v]) / deg[v];
      ++counted;
    }
  }
  return counted ? sum / counted : 0.0;
}

// Swap internal/external edge pairs to pull the realized mixing toward mu.
void rewire_toward_mixing(LfrDraft& draft, int n, double mu,
                          std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    double mix = realized_mixing(draft, n);
    if (std::abs(mix - mu) <= 0.03) return;
    std::vector<std::pair<int, int>> internal, external;
    for (auto e : draft.edges) {
      if (draft.community_of[e.first] == draft.community_of[e.second]) {
        internal.push_back(e);
      } else {
        external.push_back(e);
      }
    }
    auto pick = [&](const std::vector<std::pair<int, int>>& pool)
        -> std::pair<int, int> {
      std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
      return pool[d(rng)];
    };
    if (mix < mu) {
      // Turn two internal edges from different communities into two
      // cross edges.
      if (internal.size() < 2) return;
      auto [a, b] = pick(internal);
      auto [c, d] = pick(internal);
      if (draft.community_of[a] == draft.community_of[c]) continue;
      auto e1 = std::minmax(a, c);
      auto e2 = std::minmax(b, d);
      if (a == c || b == d || draft.edges.count(e1) || draft.edges.count(e2)) {
        continue;
      }
      draft.edges.erase(std::minmax(a, b));
      draft.edges.erase(std::minmax(c, d));
      draft.edges.insert(e1);
      draft.edges.insert(e2);
    } else {
      // Turn two cross edges into one internal edge per community.
      if (external.size() < 2) return;
      auto [a, b] = pick(external);
      auto [c, d] = pick(external);
      if (draft.community_of[a] != draft.community_of[c] ||
          draft.community_of[b] != draft.community_of[d]) {
        continue;
      }
      auto e1 = std::minmax(a, c);
      auto e2 = std::minmax(b, d);
      if (a == c || b == d || draft.edges.count(e1) || draft.edges.count(e2)) {
        continue;
      }
      draft.edges.erase(std::minmax(a, b));
      draft.edges.erase(std::minmax(c, d));
      draft.edges.insert(e1);
      draft.edges.insert(e2);
    }
  }
}

}  // namespace

LfrResult generate_lfr(const LfrParams& params) {
  if (params.n < 4 || params.tau1 <= 1.0 || params.tau2 <= 1.0 ||
      params.mu < 0.0 || params.mu > 1.0 || params.avg_degree < 1.0 ||
      params.min_community < 2) {
    throw CsError(ErrorCode::InvalidParams, "bad LFR parameters");
  }
  int max_comm = params.max_community > 0
                     ? params.max_community
                     : std::max(params.min_community, params.n / 2);
  if (params.min_community > params.n || max_comm < params.min_community) {
    throw CsError(ErrorCode::InfeasibleParams, "community bounds infeasible");
  }

  const int max_attempts = 50;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::mt19937_64 rng(derive_seed(params.seed, 0x1f7, attempt));

    // Degree sequence from a truncated power law with mean near avg_degree.
    int dmax = std::min({params.n - 1, max_comm - 1,
                         static_cast<int>(std::lround(2.5 * params.avg_degree))});
    dmax = std::max(dmax, 2);
    int dmin = 1;
    double best_gap = 1e18;
    for (int lo = 1; lo <= dmax; ++lo) {
      double gap = std::abs(power_law_mean(lo, dmax, params.tau1) -
                            params.avg_degree);
      if (gap < best_gap) {
        best_gap = gap;
        dmin = lo;
      }
    }
    std::vector<int> degree(params.n);
    for (int v = 0; v < params.n; ++v) {
      degree[v] = power_law_draw(dmin, dmax, params.tau1, rng);
    }

    // Community sizes from a power law, resampling the tail to sum to n.
    std::vector<int> sizes;
    int remaining = params.n;
    while (remaining > 0) {
      int s = 0;
      bool placed = false;
      for (int tries = 0; tries < 200; ++tries) {
        s = power_law_draw(params.min_community,
                           std::min(max_comm, remaining), params.tau2, rng);
        int after = remaining - s;
        if (after == 0 || after >= params.min_community) {
          placed = true;
          break;
        }
      }
      if (!placed) {
        // Fold the remainder into the last community.
        if (sizes.empty()) {
          s = remaining;
        } else {
          sizes.back() += remaining;
          break;
        }
      }
      sizes.push_back(s);
      remaining -= s;
    }

    // Assign vertices: high-degree vertices go to roomy communities.
    LfrDraft draft;
    draft.community_of.assign(params.n, -1);
    draft.partition.assign(sizes.size(), {});
    std::vector<int> capacity = sizes;
    std::vector<int> order(params.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return degree[a] > degree[b]; });
    std::vector<int> internal_target(params.n, 0);
    for (int v : order) {
      internal_target[v] =
          std::min(degree[v],
                   stochastic_round((1.0 - params.mu) * degree[v], rng));
      // Prefer a community roomy enough for the internal degree; among
      // those, the one with the most open slots.
      int chosen = -1;
      bool chosen_fits = false;
      for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (capacity[c] <= 0) continue;
        bool fits = sizes[c] - 1 >= internal_target[v];
        bool take = chosen < 0 || (fits && !chosen_fits) ||
                    (fits == chosen_fits &&
                     capacity[c] > capacity[static_cast<std::size_t>(chosen)]);
        if (take) {
          chosen = static_cast<int>(c);
          chosen_fits = fits;
        }
      }
      --capacity[chosen];
      draft.community_of[v] = chosen;
      draft.partition[chosen].push_back(v);
      internal_target[v] = std::min(internal_target[v], sizes[chosen] - 1);
    }
    for (auto& comm : draft.partition) std::sort(comm.begin(), comm.end());

    // Wire internal stubs per community, then external stubs globally.
    for (std::size_t c = 0; c < draft.partition.size(); ++c) {
      std::vector<int> stubs;
      for (int v : draft.partition[c]) {
        stubs.insert(stubs.end(), internal_target[v], v);
      }
      match_stubs(std::move(stubs), rng, draft.edges,
                  [](int, int) { return true; });
    }
    std::vector<int> deg_now(params.n, 0);
    for (auto [u, v] : draft.edges) {
      ++deg_now[u];
      ++deg_now[v];
    }
    if (params.mu > 0.0) {
      std::vector<int> ext_stubs;
      for (int v = 0; v < params.n; ++v) {
        int want = std::max(0, degree[v] - deg_now[v]);
        ext_stubs.insert(ext_stubs.end(), want, v);
      }
      // Residual degree beyond the internal targets crosses communities.
      match_stubs(std::move(ext_stubs), rng, draft.edges, [&](int u, int v) {
        return draft.community_of[u] != draft.community_of[v];
      });
    }

    if (params.mu > 0.0) rewire_toward_mixing(draft, params.n, params.mu, rng);

    double mixing = realized_mixing(draft, params.n);
    if (std::abs(mixing - params.mu) > 0.05) continue;

    std::vector<std::pair<int, int>> edge_list(draft.edges.begin(),
                                               draft.edges.end());
    Graph g = Graph::build(params.n, edge_list);
    bool connected_ok;
    if (params.mu == 0.0) {
      // Cross-community edges are impossible; require each community to be
      // internally connected instead of the whole graph.
      connected_ok = true;
      for (const auto& comm : draft.partition) {
        if (!g.induced(comm).graph.is_connected()) {
          connected_ok = false;
          break;
        }
      }
    } else {
      connected_ok = g.is_connected();
    }
    if (!connected_ok) continue;

    LfrResult result;
    result.graph = std::move(g);
    result.partition = std::move(draft.partition);
    result.realized_mixing = mixing;
    result.attempts = attempt + 1;
    return result;
  }
  throw CsError(ErrorCode::RetriesExhausted,
                "no acceptable LFR graph in 50 attempts");
}

std::optional<InstanceDraft> draft_instance(const Graph& g,
                                            const VertexSet& planted,
                                            MetricKind kind,
                                            std::mt19937_64& rng) {
  if (planted.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, planted.size() - 1);
  int q = planted[pick(rng)];

  const int n = g.vertex_count();
  const int k_min = kind == MetricKind::Truss ? 3 : 2;
  InstanceDraft chosen;
  InstanceDraft fallback;
  for (int k = k_min; k <= n; ++k) {
    VertexSet community = oracle_community(g, q, {kind, k});
    if (community.empty()) break;  // monotone in k for all four metrics
    fallback = {q, k, community};
    if (community.size() >= 3 && static_cast<int>(community.size()) != n) {
      chosen = {q, k, community};
    }
  }
  if (chosen.k > 0) return chosen;
  if (fallback.k > 0) return fallback;
  return std::nullopt;
}

DatasetResult generate_dataset(const DatasetSpec& spec) {
  DatasetResult result;
  std::uint64_t stream = 0;
  for (Difficulty tier : spec.tiers) {
    auto [n_lo, n_hi] = tier_vertex_range(spec.dataset, tier);
    double dense_fraction = tier == Difficulty::Hard
                                ? spec.dense_fraction_hard
                                : (tier == Difficulty::Medium
                                       ? spec.dense_fraction_medium
                                       : spec.dense_fraction_easy);
    for (MetricKind metric : spec.metrics) {
      ++stream;
      ManifestRow row{spec.dataset, tier, metric};
      long long sum_v = 0, sum_e = 0, sum_vh = 0;
      std::uint64_t index = 0;
      const std::uint64_t attempt_cap =
          static_cast<std::uint64_t>(spec.per_tier_per_metric) * 100 + 100;
      while (row.count < spec.per_tier_per_metric && index < attempt_cap) {
        std::uint64_t sub_seed = derive_seed(spec.base_seed, stream, index);
        ++index;
        std::mt19937_64 rng(splitmix64(sub_seed));
        std::uniform_int_distribution<int> size_pick(n_lo, n_hi);
        int n = size_pick(rng);

        Graph graph;
        VertexSet q_pool;
        VertexSet planted_check;
        std::vector<VertexSet> partition;
        try {
          if (spec.dataset == DatasetKind::Psg) {
            PsgParams params;
            params.n = n;
            params.dense_size = std::clamp(
                static_cast<int>(std::ceil(dense_fraction * n)), 2, n);
            params.seed = sub_seed;
            auto psg = generate_psg(params);
            graph = std::move(psg.graph);
            q_pool = psg.planted;
            planted_check = std::move(psg.planted);
          } else {
            LfrParams params;
            params.n = n;
            params.seed = sub_seed;
            auto lfr = generate_lfr(params);
            graph = std::move(lfr.graph);
            partition = std::move(lfr.partition);
            for (const auto& comm : partition) {
              q_pool.insert(q_pool.end(), comm.begin(), comm.end());
            }
            std::sort(q_pool.begin(), q_pool.end());
          }
        } catch (const CsError&) {
          ++row.discarded;
          continue;
        }

        auto draft = draft_instance(graph, q_pool, metric, rng);
        if (!draft) {
          ++row.discarded;
          continue;
        }
        if (!partition.empty()) {
          for (const auto& comm : partition) {
            if (set_contains(comm, draft->query)) {
              planted_check = comm;
              break;
            }
          }
        }
        // Disconnected graphs are kept only when q's component covers the
        // planted region.
        if (!is_subset(planted_check, graph.component_of(draft->query))) {
          ++row.discarded;
          continue;
        }

        TaskInstance inst;
        char id[96];
        std::snprintf(id, sizeof(id), "%s-%s-%s-%06d",
                      dataset_kind_name(spec.dataset), difficulty_name(tier),
                      metric_kind_name(metric), row.count);
        inst.instance_id = id;
        inst.dataset = spec.dataset;
        inst.difficulty = tier;
        inst.metric = metric;
        inst.k = draft->k;
        inst.query = draft->query;
        inst.graph = std::move(graph);
        inst.ground_truth = draft->ground_truth;
        inst.seed = sub_seed;

        sum_v += inst.graph.vertex_count();
        sum_e += static_cast<long long>(inst.graph.edge_count());
        sum_vh += static_cast<long long>(inst.ground_truth.size());
        result.instances.push_back(std::move(inst));
        ++row.count;
      }
      if (row.count > 0) {
        row.mean_v = static_cast<double>(sum_v) / row.count;
        row.mean_e = static_cast<double>(sum_e) / row.count;
        row.mean_vh = static_cast<double>(sum_vh) / row.count;
      }
      result.manifest.push_back(row);
    }
  }
  return result;
}

std::string manifest_to_json(const std::vector<ManifestRow>& manifest) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : manifest) {
    nlohmann::ordered_json r;
    r["dataset"] = dataset_kind_name(row.dataset);
    r["tier"] = difficulty_name(row.tier);
    r["metric"] = metric_kind_name(row.metric);
    r["count"] = row.count;
    r["discarded"] = row.discarded;
    r["mean_v"] = row.mean_v;
    r["mean_e"] = row.mean_e;
    r["mean_vh"] = row.mean_vh;
    rows.push_back(std::move(r));
  }
  return rows.dump(2) + "\n";
}

void write_dataset(const DatasetResult& result, const std::string& dataset_path,
                   const std::string& manifest_path) {
  write_dataset_file(dataset_path, result.instances);
  std::ofstream out(manifest_path, std::ios::trunc);
  if (!out) throw CsError(ErrorCode::IoError, "cannot open " + manifest_path);
  out << manifest_to_json(result.manifest);
}

}  // namespace cs
