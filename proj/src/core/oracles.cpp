#include "core/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <queue>

namespace cs {

namespace {

void require_vertex(const Graph& g, int q) {
  if (!g.contains(q)) {
    throw CsError(ErrorCode::VertexNotInGraph, "vertex " + std::to_string(q));
  }
}

// Component of q restricted to `alive` vertices.
VertexSet component_within(const Graph& g, int q, const std::vector<char>& alive) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::queue<int> frontier;
  frontier.push(q);
  seen[q] = 1;
  VertexSet out;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    out.push_back(u);
    for (int w : g.neighbors(u)) {
      if (alive[w] && !seen[w]) {
        seen[w] = 1;
        frontier.push(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

VertexSet k_core_community(const Graph& g, int q, int k) {
  require_vertex(g, q);
  if (k < 1) throw CsError(ErrorCode::InvalidParams, "k must be >= 1");
  const int n = g.vertex_count();
  std::vector<int> degree(n);
  for (int v = 0; v < n; ++v) degree[v] = g.degree(v);
  std::vector<char> alive(n, 1);
  std::queue<int> peel;
  for (int v = 0; v < n; ++v) {
    if (degree[v] < k) peel.push(v);
  }
  while (!peel.empty()) {
    int v = peel.front();
    peel.pop();
    if (!alive[v]) continue;
    alive[v] = 0;
    for (int w : g.neighbors(v)) {
      if (alive[w] && --degree[w] == k - 1) peel.push(w);
    }
  }
  if (!alive[q]) return {};
  return component_within(g, q, alive);
}

VertexSet k_truss_community(const Graph& g, int q, int k) {
  require_vertex(g, q);
  if (k < 3) throw CsError(ErrorCode::KTooSmall, "truss requires k >= 3");
  const auto edge_list = g.edges();
  const int m = static_cast<int>(edge_list.size());
  std::vector<char> edge_alive(m, 1);

  // edge id lookup
  std::vector<std::vector<std::pair<int, int>>> incident(g.vertex_count());
  for (int e = 0; e < m; ++e) {
    auto [u, v] = edge_list[e];
    incident[u].emplace_back(v, e);
    incident[v].emplace_back(u, e);
  }
  auto edge_id = [&](int u, int v) -> int {
    for (auto [w, e] : incident[u]) {
      if (w == v) return e;
    }
    return -1;
  };
  auto support_of = [&](int e) {
    auto [u, v] = edge_list[e];
    int support = 0;
    for (auto [w, eu] : incident[u]) {
      if (!edge_alive[eu]) continue;
      int ev = edge_id(v, w);
      if (ev >= 0 && edge_alive[ev]) ++support;
    }
    return support;
  };

  // Peel edges with support < k-2 to a fixed point.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int e = 0; e < m; ++e) {
      if (edge_alive[e] && support_of(e) < k - 2) {
        edge_alive[e] = 0;
        changed = true;
      }
    }
  }

  // Component of q in the surviving edge subgraph.
  std::vector<std::vector<int>> surviving(g.vertex_count());
  for (int e = 0; e < m; ++e) {
    if (!edge_alive[e]) continue;
    auto [u, v] = edge_list[e];
    surviving[u].push_back(v);
    surviving[v].push_back(u);
  }
  if (surviving[q].empty()) return {};
  std::vector<char> seen(g.vertex_count(), 0);
  std::queue<int> frontier;
  frontier.push(q);
  seen[q] = 1;
  VertexSet out;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    out.push_back(u);
    for (int w : surviving[u]) {
      if (!seen[w]) {
        seen[w] = 1;
        frontier.push(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Bron-Kerbosch with pivoting over sorted vertex vectors; reports every
// maximal clique through `sink`.
void bron_kerbosch(const Graph& g, VertexSet r, VertexSet p, VertexSet x,
                   const std::function<void(const VertexSet&)>& sink) {
  if (p.empty() && x.empty()) {
    sink(r);
    return;
  }
  int pivot = -1;
  std::size_t best = 0;
  for (const VertexSet* side : {&p, &x}) {
    for (int u : *side) {
      std::size_t overlap = set_intersection(p, g.neighbors(u)).size();
      if (pivot < 0 || overlap > best) {
        pivot = u;
        best = overlap;
      }
    }
  }
  VertexSet candidates;
  for (int v : p) {
    if (!g.has_edge(pivot, v)) candidates.push_back(v);
  }
  for (int v : candidates) {
    const auto& nbrs = g.neighbors(v);
    VertexSet r2 = r;
    r2.insert(std::lower_bound(r2.begin(), r2.end(), v), v);
    bron_kerbosch(g, std::move(r2), set_intersection(p, nbrs),
                  set_intersection(x, nbrs), sink);
    p.erase(std::remove(p.begin(), p.end(), v), p.end());
    x.insert(std::lower_bound(x.begin(), x.end(), v), v);
  }
}

bool better_candidate(const VertexSet& challenger, const VertexSet& best) {
  if (best.empty()) return true;
  if (challenger.size() != best.size()) return challenger.size() > best.size();
  return std::lexicographical_compare(challenger.begin(), challenger.end(),
                                      best.begin(), best.end());
}

}  // namespace

VertexSet k_clique_community(const Graph& g, int q, int k) {
  require_vertex(g, q);
  if (k < 2) throw CsError(ErrorCode::InvalidParams, "k must be >= 2");
  // Cliques containing q are {q} plus cliques of the neighborhood of q.
  VertexSet best;
  bron_kerbosch(g, {}, g.neighbors(q), {}, [&](const VertexSet& clique) {
    VertexSet with_q = clique;
    with_q.insert(std::lower_bound(with_q.begin(), with_q.end(), q), q);
    if (better_candidate(with_q, best)) best = with_q;
  });
  if (best.empty()) best = {q};
  if (static_cast<int>(best.size()) < k) return {};
  return best;
}

CutResult global_min_cut(const Graph& g) {
  const int n = g.vertex_count();
  if (n < 2) throw CsError(ErrorCode::TooSmall, "min cut needs >= 2 vertices");
  if (!g.is_connected()) {
    throw CsError(ErrorCode::Disconnected, "min cut of disconnected graph");
  }
  // Stoer-Wagner on unit weights; supervertex groups keep the shore.
  std::vector<std::vector<int>> weight(n, std::vector<int>(n, 0));
  for (auto [u, v] : g.edges()) {
    weight[u][v] = 1;
    weight[v][u] = 1;
  }
  std::vector<VertexSet> group(n);
  for (int v = 0; v < n; ++v) group[v] = {v};
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);

  CutResult best;
  best.value = -1;
  while (active.size() > 1) {
    // Maximum-adjacency order; ties broken by smallest vertex id.
    std::vector<int> order;
    std::vector<int> attach(n, 0);
    std::vector<char> in_order(n, 0);
    for (std::size_t step = 0; step < active.size(); ++step) {
      int pick = -1;
      for (int v : active) {
        if (in_order[v]) continue;
        if (pick < 0 || attach[v] > attach[pick]) pick = v;
      }
      in_order[pick] = 1;
      order.push_back(pick);
      for (int v : active) {
        if (!in_order[v]) attach[v] += weight[pick][v];
      }
    }
    int last = order.back();
    int prev = order[order.size() - 2];
    int cut_of_phase = attach[last];
    if (best.value < 0 || cut_of_phase < best.value) {
      best.value = cut_of_phase;
      best.side = group[last];
    }
    // Contract last into prev.
    for (int v : active) {
      if (v == last || v == prev) continue;
      weight[prev][v] += weight[last][v];
      weight[v][prev] = weight[prev][v];
    }
    group[prev].insert(group[prev].end(), group[last].begin(), group[last].end());
    std::sort(group[prev].begin(), group[prev].end());
    active.erase(std::remove(active.begin(), active.end(), last), active.end());
  }
  return best;
}

VertexSet k_ecc_community(const Graph& g, int q, int k) {
  require_vertex(g, q);
  if (k < 1) throw CsError(ErrorCode::InvalidParams, "k must be >= 1");
  VertexSet current = g.component_of(q);
  while (current.size() >= 2) {
    auto sub = g.induced(current);
    CutResult cut = global_min_cut(sub.graph);
    if (cut.value >= k) return current;
    // Follow the shore containing q.
    VertexSet shore;
    for (int local : cut.side) shore.push_back(sub.to_original[local]);
    std::sort(shore.begin(), shore.end());
    if (set_contains(shore, q)) {
      current = std::move(shore);
    } else {
      VertexSet rest;
      std::set_difference(current.begin(), current.end(), shore.begin(),
                          shore.end(), std::back_inserter(rest));
      current = std::move(rest);
    }
  }
  return {};
}

VertexSet oracle_community(const Graph& g, int q, const Metric& metric) {
  switch (metric.kind) {
    case MetricKind::Core: return k_core_community(g, q, metric.k);
    case MetricKind::Truss: return k_truss_community(g, q, metric.k);
    case MetricKind::Clique: return k_clique_community(g, q, metric.k);
    case MetricKind::Ecc: return k_ecc_community(g, q, metric.k);
  }
  throw CsError(ErrorCode::InvalidParams, "bad metric kind");
}

namespace {

using Mask = std::uint32_t;

bool mask_connected(const std::vector<Mask>& adj, Mask mask) {
  if (mask == 0) return false;
  Mask start = mask & (~mask + 1);
  Mask seen = start;
  Mask frontier = start;
  while (frontier) {
    Mask next = 0;
    Mask f = frontier;
    while (f) {
      int v = std::countr_zero(f);
      f &= f - 1;
      next |= adj[v] & mask & ~seen;
    }
    seen |= next;
    frontier = next;
  }
  return seen == mask;
}

bool core_condition(const std::vector<Mask>& adj, Mask mask, int k) {
  Mask f = mask;
  while (f) {
    int v = std::countr_zero(f);
    f &= f - 1;
    if (std::popcount(adj[v] & mask) < k) return false;
  }
  return true;
}

bool clique_condition(const std::vector<Mask>& adj, Mask mask, int k) {
  if (std::popcount(mask) < k) return false;
  Mask f = mask;
  while (f) {
    int v = std::countr_zero(f);
    f &= f - 1;
    if ((adj[v] & mask) != (mask & ~(Mask{1} << v))) return false;
  }
  return true;
}

// A vertex set qualifies for k-truss when the truss fixed point of its
// induced subgraph still spans and connects every vertex of the set.
bool truss_condition(const std::vector<Mask>& adj, Mask mask, int k) {
  if (std::popcount(mask) < 2) return false;
  std::vector<std::pair<int, int>> edges;
  Mask f = mask;
  while (f) {
    int u = std::countr_zero(f);
    f &= f - 1;
    Mask nb = adj[u] & mask;
    while (nb) {
      int v = std::countr_zero(nb);
      nb &= nb - 1;
      if (u < v) edges.emplace_back(u, v);
    }
  }
  std::vector<char> alive(edges.size(), 1);
  auto alive_edge = [&](int u, int v) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (alive[e] && edges[e] == std::pair<int, int>{std::min(u, v), std::max(u, v)}) {
        return true;
      }
    }
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (!alive[e]) continue;
      auto [u, v] = edges[e];
      int support = 0;
      Mask common = adj[u] & adj[v] & mask;
      while (common) {
        int w = std::countr_zero(common);
        common &= common - 1;
        if (alive_edge(u, w) && alive_edge(v, w)) ++support;
      }
      if (support < k - 2) {
        alive[e] = 0;
        changed = true;
      }
    }
  }
  // Survivors must span the set and stay connected.
  std::vector<Mask> surv(adj.size(), 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!alive[e]) continue;
    auto [u, v] = edges[e];
    surv[u] |= Mask{1} << v;
    surv[v] |= Mask{1} << u;
  }
  f = mask;
  while (f) {
    int v = std::countr_zero(f);
    f &= f - 1;
    if (surv[v] == 0) return false;
  }
  return mask_connected(surv, mask);
}

bool ecc_condition(const std::vector<Mask>& adj,
                   const std::vector<std::pair<int, int>>& all_edges, Mask mask,
                   int k) {
  if (std::popcount(mask) < 2) return false;
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : all_edges) {
    if ((mask >> u & 1) && (mask >> v & 1)) edges.emplace_back(u, v);
  }
  Mask low = mask & (~mask + 1);
  // All bipartitions with the lowest vertex pinned to one shore.
  for (Mask sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
    if (!(sub & low)) continue;
    int crossing = 0;
    for (auto [u, v] : edges) {
      bool a = sub >> u & 1;
      bool b = sub >> v & 1;
      if (a != b) ++crossing;
    }
    if (crossing < k) return false;
  }
  return true;
}

}  // namespace

VertexSet brute_force_community(const Graph& g, int q, const Metric& metric) {
  require_vertex(g, q);
  const int n = g.vertex_count();
  if (n > 12) {
    throw CsError(ErrorCode::GraphTooLarge, "brute force capped at n <= 12");
  }
  if (metric.kind == MetricKind::Truss && metric.k < 3) {
    throw CsError(ErrorCode::KTooSmall, "truss requires k >= 3");
  }
  std::vector<Mask> adj(n, 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= Mask{1} << v;
    adj[v] |= Mask{1} << u;
  }
  const auto edge_list = g.edges();

  VertexSet best;
  for (Mask mask = 1; mask < (Mask{1} << n); ++mask) {
    if (!(mask >> q & 1)) continue;
    if (!mask_connected(adj, mask)) continue;
    bool ok = false;
    switch (metric.kind) {
      case MetricKind::Core:
        ok = core_condition(adj, mask, metric.k);
        break;
      case MetricKind::Truss:
        ok = truss_condition(adj, mask, metric.k);
        break;
      case MetricKind::Clique:
        ok = clique_condition(adj, mask, metric.k);
        break;
      case MetricKind::Ecc:
        ok = ecc_condition(adj, edge_list, mask, metric.k);
        break;
    }
    if (!ok) continue;
    VertexSet members;
    for (int v = 0; v < n; ++v) {
      if (mask >> v & 1) members.push_back(v);
    }
    if (better_candidate(members, best)) best = members;
  }
  return best;
}

}  // namespace cs
