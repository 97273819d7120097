#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "core/error.hpp"

namespace cs {

// Sorted, duplicate-free vector of vertex ids.
using VertexSet = std::vector<int>;

VertexSet make_vertex_set(std::vector<int> ids);
bool set_contains(const VertexSet& s, int v);
bool is_subset(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);

// Immutable simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;

  // Duplicate edges collapse silently; self-loops and out-of-range
  // endpoints are errors.
  static Graph build(int n, const std::vector<std::pair<int, int>>& edges);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const;
  bool contains(int v) const { return v >= 0 && v < n_; }
  const std::vector<int>& neighbors(int v) const;
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  bool has_edge(int u, int v) const;
  std::vector<std::pair<int, int>> edges() const;  // u < v, sorted

  struct Induced;
  Induced induced(const VertexSet& s) const;

  VertexSet component_of(int v) const;
  bool is_connected() const;

 private:
  int n_ = 0;
  std::vector<std::vector<int>> adj_;
};

struct Graph::Induced {
  Graph graph;
  std::vector<int> to_original;  // induced id -> original id
};

}  // namespace cs
