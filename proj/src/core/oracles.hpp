#pragma once

#include "core/graph.hpp"
#include "core/instance.hpp"

namespace cs {

struct CutResult {
  int value = 0;
  VertexSet side;  // one shore of the cut
};

// Exact ground-truth communities. An empty result means no community of the
// given metric/k contains q; that is a value, not an error.
VertexSet k_core_community(const Graph& g, int q, int k);
VertexSet k_truss_community(const Graph& g, int q, int k);
VertexSet k_clique_community(const Graph& g, int q, int k);
VertexSet k_ecc_community(const Graph& g, int q, int k);

VertexSet oracle_community(const Graph& g, int q, const Metric& metric);

// Global minimum edge cut (Stoer-Wagner, fixed contraction order).
CutResult global_min_cut(const Graph& g);

// Exponential reference oracle for graphs with n <= 12: enumerate connected
// vertex subsets containing q and keep the largest qualifying one
// (lexicographically smallest vertex list on ties).
VertexSet brute_force_community(const Graph& g, int q, const Metric& metric);

}  // namespace cs
