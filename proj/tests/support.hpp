#pragma once

#include <algorithm>
#include <cstdlib>
#include <initializer_list>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "rotgraph/graph.hpp"

namespace testsupport {

using namespace rotgraph;

// Fixed unless ROTGRAPH_SEED is set.
inline std::uint64_t seed() {
  if (const char* s = std::getenv("ROTGRAPH_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611;
}

inline Graph make_graph(int n, std::initializer_list<Graph::Edge> edges) {
  std::vector<Graph::Edge> e(edges);
  return Graph(n, e);
}

inline VertexMask mask_of(std::initializer_list<Vertex> vs) {
  VertexMask m = 0;
  for (Vertex v : vs) m |= bit(v);
  return m;
}

// Edge set as a bit mask over the pairs (u < v) in lexicographic order.
inline std::uint32_t edge_code(const Graph& g, const std::vector<int>& perm) {
  const int n = g.order();
  std::uint32_t code = 0;
  int k = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v, ++k) {
      if (g.adjacent(perm[u], perm[v])) code |= std::uint32_t{1} << k;
    }
  }
  return code;
}

// One representative per isomorphism class of connected graphs on n vertices.
inline std::vector<Graph> connected_graphs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::set<std::uint32_t> seen;
  std::vector<Graph> out;
  for (std::uint32_t code = 0; code < (std::uint32_t{1} << pairs.size()); ++code) {
    std::vector<Graph::Edge> edges;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (code & (std::uint32_t{1} << k)) edges.push_back(pairs[k]);
    }
    Graph g(n, edges);
    if (!is_connected(g)) continue;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::uint32_t best = ~std::uint32_t{0};
    do {
      best = std::min(best, edge_code(g, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (seen.insert(best).second) out.push_back(g);
  }
  return out;
}

}  // namespace testsupport
