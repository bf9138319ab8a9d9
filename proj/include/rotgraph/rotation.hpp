#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rotgraph/elim_tree.hpp"
#include "rotgraph/graph.hpp"

namespace rotgraph {

using Ordinal = std::uint32_t;

// The pair of a rotation: `upper` is the parent of `lower` in the source tree.
struct RotatedPair {
  std::uint8_t upper = 0;
  std::uint8_t lower = 0;

  bool involves(Vertex a, Vertex b) const {
    return (upper == a && lower == b) || (upper == b && lower == a);
  }
  friend bool operator==(const RotatedPair&, const RotatedPair&) = default;
};

// uv-rotation of T on g, where v is a child of u.
ElimTree rotate(const Graph& g, const ElimTree& t, Vertex u, Vertex v);

struct Neighbor {
  ElimTree tree;
  RotatedPair pair;
};

// One rotation per tree edge of t.
std::vector<Neighbor> rotation_neighbors(const Graph& g, const ElimTree& t);

struct BuildOptions {
  std::size_t max_trees = 5'000'000;
  bool edge_labels = true;
};

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::size_t cap, std::size_t discovered)
      : std::runtime_error("rotation graph exceeds the cap of " + std::to_string(cap) +
                           " trees (" + std::to_string(discovered) + " discovered)"),
        discovered_(discovered) {}
  std::size_t discovered() const { return discovered_; }

 private:
  std::size_t discovered_;
};

// Explicit rotation graph R(G): every search tree of G with its rotation
// neighbours. Ordinals follow BFS order from tree_from_order(G, identity),
// with newly discovered trees of each expansion sorted by TreeKey.
class RotationGraph {
 public:
  RotationGraph(const Graph& g, BuildOptions options);

  const Graph& graph() const { return graph_; }
  std::size_t size() const { return trees_.size(); }
  std::size_t edge_count() const { return targets_.size() / 2; }
  const ElimTree& tree(Ordinal o) const { return trees_.at(o); }
  const std::vector<ElimTree>& trees() const { return trees_; }
  std::optional<Ordinal> find(const ElimTree& t) const;
  Ordinal at(const ElimTree& t) const;

  // Sorted neighbour ordinals.
  std::span<const Ordinal> neighbors(Ordinal o) const {
    return {targets_.data() + offsets_[o], targets_.data() + offsets_[o + 1]};
  }
  bool has_labels() const { return labeled_; }
  // Rotated pair per neighbour, parallel to neighbors(o); pair as seen from o.
  std::span<const RotatedPair> labels(Ordinal o) const;
  bool adjacent(Ordinal a, Ordinal b) const;
  // Label of the edge a-b as seen from a; throws if not adjacent or unlabeled.
  RotatedPair label(Ordinal a, Ordinal b) const;
  // Number of times two tree edges produced the same rotated tree.
  std::size_t parallel_rotations() const { return parallel_rotations_; }

 private:
  Graph graph_;
  std::vector<ElimTree> trees_;
  std::unordered_map<std::uint64_t, Ordinal> index_;
  std::vector<std::uint64_t> offsets_;
  std::vector<Ordinal> targets_;
  std::vector<RotatedPair> labels_;
  std::size_t parallel_rotations_ = 0;
  bool labeled_ = false;
};

RotationGraph build_rotation_graph(const Graph& g, BuildOptions options = {});

// All distinct trees tree_from_order(g, sigma) over every permutation sigma.
std::vector<ElimTree> trees_from_all_orders(const Graph& g);

// --- exports -----------------------------------------------------------------

// "uv" from the vertex labels; joined with '-' when a label is longer than one character.
std::string pair_label(const Graph& g, RotatedPair pair);

std::string rotation_graph_to_dot(const RotationGraph& rg, std::span<const int> fill_colors = {});
// {"trees": [...], "edges": [[a,b,"uv"], ...]}
std::string rotation_graph_to_json(const RotationGraph& rg);
// Little-endian: "RGEL", u32 version, u32 vertex count, u64 edge count, then
// u32 pairs (a < b) in increasing order.
std::string rotation_graph_to_binary(const RotationGraph& rg);

}  // namespace rotgraph
