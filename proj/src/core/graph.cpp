#include "core/graph.hpp"

#include <algorithm>
#include <queue>

namespace cs {

VertexSet make_vertex_set(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool set_contains(const VertexSet& s, int v) {
  return std::binary_search(s.begin(), s.end(), v);
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

Graph Graph::build(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 1) {
    throw CsError(ErrorCode::InvalidParams, "vertex count must be >= 1");
  }
  Graph g;
  g.n_ = n;
  g.adj_.assign(n, {});
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw CsError(ErrorCode::EndpointOutOfRange,
                    "edge (" + std::to_string(u) + "," + std::to_string(v) +
                        ") outside [0," + std::to_string(n) + ")");
    }
    if (u == v) {
      throw CsError(ErrorCode::SelfLoop, "self-loop at " + std::to_string(u));
    }
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (auto& nbrs : g.adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return g;
}

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nbrs : adj_) twice += nbrs.size();
  return twice / 2;
}

const std::vector<int>& Graph::neighbors(int v) const {
  if (!contains(v)) {
    throw CsError(ErrorCode::VertexNotInGraph, "vertex " + std::to_string(v));
  }
  return adj_[v];
}

bool Graph::has_edge(int u, int v) const {
  if (!contains(u) || !contains(v)) return false;
  const auto& nbrs = adj_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n_; ++u) {
    for (int v : adj_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph::Induced Graph::induced(const VertexSet& s) const {
  std::vector<int> remap(n_, -1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    int v = s[i];
    if (!contains(v)) {
      throw CsError(ErrorCode::VertexNotInGraph, "vertex " + std::to_string(v));
    }
    remap[v] = static_cast<int>(i);
  }
  std::vector<std::pair<int, int>> sub_edges;
  for (int v : s) {
    for (int w : adj_[v]) {
      if (v < w && remap[w] >= 0) sub_edges.emplace_back(remap[v], remap[w]);
    }
  }
  Induced result;
  // An empty selection yields the 1-vertex placeholder-free minimum; callers
  // treat to_original as authoritative for size.
  result.graph = s.empty() ? Graph() : build(static_cast<int>(s.size()), sub_edges);
  result.to_original = s;
  return result;
}

VertexSet Graph::component_of(int v) const {
  if (!contains(v)) {
    throw CsError(ErrorCode::VertexNotInGraph, "vertex " + std::to_string(v));
  }
  std::vector<char> seen(n_, 0);
  std::queue<int> frontier;
  frontier.push(v);
  seen[v] = 1;
  VertexSet out;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    out.push_back(u);
    for (int w : adj_[u]) {
      if (!seen[w]) {
        seen[w] = 1;
        frontier.push(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Graph::is_connected() const {
  if (n_ == 0) return true;
  return static_cast<int>(component_of(0).size()) == n_;
}

}  // namespace cs
