#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rotgraph/graph.hpp"

namespace rotgraph {

class ElimTree;

namespace detail {
struct TreeAccess;
}

// Canonical fixed-width encoding of a tree: one byte per vertex id of the
// universe holding the parent id, kRootByte at the root and kAbsentByte for
// ids outside the tree. Two trees are equal iff their keys are equal.
class TreeKey {
 public:
  static constexpr std::uint8_t kRootByte = 0xFF;
  static constexpr std::uint8_t kAbsentByte = 0xFE;

  TreeKey() = default;
  explicit TreeKey(const ElimTree& tree);

  std::span<const std::uint8_t> bytes() const { return {bytes_.data(), size_}; }
  std::size_t size() const { return size_; }
  std::string hex() const;
  // Nibble-packed form (universe <= 16, every vertex present): parent id per
  // vertex, with the root storing its own id.
  std::uint64_t packed() const;

  friend bool operator==(const TreeKey& a, const TreeKey& b) {
    return a.size_ == b.size_ && std::equal(a.bytes_.begin(), a.bytes_.begin() + a.size_, b.bytes_.begin());
  }
  friend bool operator<(const TreeKey& a, const TreeKey& b) {
    return std::lexicographical_compare(a.bytes_.begin(), a.bytes_.begin() + a.size_, b.bytes_.begin(),
                                        b.bytes_.begin() + b.size_);
  }

 private:
  std::array<std::uint8_t, 16> bytes_{};
  std::uint8_t size_ = 0;
};

// A rooted tree on a subset of the ids 0..universe()-1. On a connected graph
// G with every id present it may or may not be a search tree of G; see
// validate(). Values are small and trivially copyable.
class ElimTree {
 public:
  static constexpr int kMaxVertices = 16;
  static constexpr Vertex kNone = -1;

  ElimTree() = default;

  // parent[v] == -1 marks the root, -2 an id absent from the tree.
  static ElimTree from_parents(std::span<const int> parent);
  // A path rooted at order[0] with consecutive vertices order[0], order[1], ...
  static ElimTree path(std::span<const Vertex> order);
  static ElimTree from_key(const TreeKey& key);

  int universe() const { return universe_; }
  int size() const;
  VertexMask vertices() const { return present_; }
  bool contains(Vertex v) const { return v >= 0 && v < universe_ && (present_ & bit(v)); }
  Vertex root() const { return root_; }
  Vertex parent(Vertex v) const;
  VertexMask children(Vertex v) const;
  int child_count(Vertex v) const { return std::popcount(children(v)); }
  bool is_leaf(Vertex v) const { return children(v) == 0; }
  int depth(Vertex v) const;
  int height() const;
  // Vertices of T|v.
  VertexMask subtree(Vertex v) const;
  // subtree(v) for every id at once; zero for absent ids.
  std::array<VertexMask, kMaxVertices> subtree_masks() const;
  // Root-to-v path r_T = a_0, ..., a_d = v.
  std::vector<Vertex> branch_to(Vertex v) const;
  // True if u lies on the root path of v (u == v counts).
  bool is_ancestor(Vertex u, Vertex v) const;
  std::vector<VertexMask> levels() const;
  // Vertices top-down when the tree is a path; empty otherwise.
  std::vector<Vertex> path_order() const;

  TreeKey key() const { return TreeKey(*this); }
  // "0123"-style order string for paths, otherwise the key in hex.
  std::string to_string() const;
  std::string to_string(const Graph& g) const;

  friend bool operator==(const ElimTree& a, const ElimTree& b) {
    return a.universe_ == b.universe_ && a.present_ == b.present_ && a.root_ == b.root_ &&
           a.parent_ == b.parent_;
  }

 private:
  std::array<std::int8_t, kMaxVertices> parent_{};
  VertexMask present_ = 0;
  std::int8_t universe_ = 0;
  std::int8_t root_ = kNone;

  void check_member(Vertex v) const;
  void normalize();

  friend struct detail::TreeAccess;
};

// Unique search tree induced by deleting vertices of g in `order`.
ElimTree tree_from_order(const Graph& g, std::span<const Vertex> order);

// True iff t spans V(g), g is connected, and every non-root subtree T|v is a
// connected component of g minus all vertices on levels above v.
bool validate(const Graph& g, const ElimTree& t);

// T(i, x, v): insert x on the root path of v at level i (0 <= i <= depth(v)+1).
ElimTree insert(const ElimTree& t, int level, Vertex x, Vertex v);

// p(T, u): remove u, which must have at most one child.
ElimTree eliminate(const ElimTree& t, Vertex u);

// f*(T) for a bijection f given as an image table over the universe.
ElimTree relabel(const ElimTree& t, std::span<const Vertex> f);

// Transposition of two ids, as an image table of the given size.
std::vector<Vertex> swap_permutation(int size, Vertex a, Vertex b);

struct DeepestClique {
  int level = 0;   // lambda(T)
  Vertex vertex = ElimTree::kNone;
};

// lambda(T) and v_lambda(T) for a clique K: the deepest K-vertex. Throws if
// the K-vertices do not lie on a common branch.
DeepestClique deepest_in(const ElimTree& t, VertexMask clique);

std::string tree_to_json(const ElimTree& t);
ElimTree tree_from_json(std::string_view text);
ElimTree load_tree_file(const std::string& path);

}  // namespace rotgraph

template <>
struct std::hash<rotgraph::TreeKey> {
  std::size_t operator()(const rotgraph::TreeKey& k) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (auto b : k.bytes()) h = (h ^ b) * 1099511628211ULL;
    return h;
  }
};
