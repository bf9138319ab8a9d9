#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rotgraph/elim_tree.hpp"
#include "rotgraph/graph.hpp"

namespace testsupport {

using namespace rotgraph;

// Search-tree test straight from the recursive definition: the root's child
// subtrees are exactly the components of G minus the root, recursively.
inline bool is_search_tree_recursive(const Graph& g, const std::vector<int>& parent) {
  const int n = g.order();
  auto subtree = [&](Vertex c) {
    VertexMask out = 0;
    for (Vertex w = 0; w < n; ++w) {
      Vertex a = w;
      for (int steps = 0; steps <= n && a >= 0; ++steps, a = parent[a]) {
        if (a == c) {
          out |= bit(w);
          break;
        }
      }
    }
    return out;
  };
  std::function<bool(VertexMask, Vertex)> check = [&](VertexMask set, Vertex r) {
    VertexMask kids = 0;
    for (Vertex c = 0; c < n; ++c) {
      if (parent[c] == r) kids |= bit(c);
    }
    const auto comps = connected_components(g, set & ~bit(r));
    if (comps.size() != static_cast<std::size_t>(std::popcount(kids))) return false;
    for (VertexMask comp : comps) {
      const VertexMask here = comp & kids;
      if (std::popcount(here) != 1) return false;
      const Vertex c = std::countr_zero(here);
      if (subtree(c) != comp || !check(comp, c)) return false;
    }
    return true;
  };
  Vertex root = -1;
  for (Vertex v = 0; v < n; ++v) {
    if (parent[v] == -1) {
      if (root != -1) return false;
      root = v;
    }
  }
  if (root == -1 || subtree(root) != g.vertices()) return false;
  return check(g.vertices(), root);
}

// Every rooted spanning tree on 0..n-1 as a parent array (-1 at the root).
inline void for_each_rooted_tree(int n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> parent(static_cast<std::size_t>(n), 0);
  for (Vertex root = 0; root < n; ++root) {
    std::vector<Vertex> others;
    for (Vertex v = 0; v < n; ++v)
      if (v != root) others.push_back(v);
    std::vector<int> choice(others.size(), 0);
    while (true) {
      parent[root] = -1;
      for (std::size_t k = 0; k < others.size(); ++k) parent[others[k]] = choice[k];
      bool ok = true;
      for (Vertex v : others) {
        if (parent[v] == v) {
          ok = false;
          break;
        }
        Vertex a = v;
        int steps = 0;
        while (a != root && steps <= n) a = parent[a], ++steps;
        if (a != root) {
          ok = false;
          break;
        }
      }
      if (ok) f(parent);
      std::size_t k = 0;
      while (k < choice.size() && ++choice[k] == n) choice[k++] = 0;
      if (k == choice.size()) break;
    }
  }
}

}  // namespace testsupport
