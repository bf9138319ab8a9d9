#include "rotgraph/rotation.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>

namespace rotgraph {

namespace detail {

// Direct access to the parent array; the bulk builder cannot afford the
// validating constructors on every rotation.
struct TreeAccess {
  using Masks = std::array<VertexMask, ElimTree::kMaxVertices>;

  static Masks children_masks(const ElimTree& t) {
    Masks kids{};
    for_each_vertex(t.present_, [&](Vertex v) {
      if (v != t.root_) kids[t.parent_[v]] |= bit(v);
    });
    return kids;
  }

  static ElimTree rotate(const Graph& g, const ElimTree& t, const Masks& sub, const Masks& kids,
                         Vertex u, Vertex v) {
    ElimTree r = t;
    const std::int8_t p = t.parent_[u];
    r.parent_[v] = p;
    if (p == ElimTree::kNone) r.root_ = static_cast<std::int8_t>(v);
    r.parent_[u] = static_cast<std::int8_t>(v);
    const VertexMask nu = g.neighbors(u);
    for_each_vertex(kids[v], [&](Vertex c) {
      if (sub[c] & nu) r.parent_[c] = static_cast<std::int8_t>(u);
    });
    return r;
  }

  static std::uint64_t packed(const ElimTree& t) {
    std::uint64_t word = 0;
    for (Vertex v = 0; v < t.universe_; ++v) {
      const std::uint64_t nibble = t.parent_[v] < 0 ? v : t.parent_[v];
      word |= nibble << (4 * v);
    }
    return word;
  }
};

}  // namespace detail

using detail::TreeAccess;

ElimTree rotate(const Graph& g, const ElimTree& t, Vertex u, Vertex v) {
  if (!t.contains(u) || !t.contains(v) || v == t.root() || t.parent(v) != u) {
    throw std::invalid_argument("rotation needs " + std::to_string(v) + " to be a child of " +
                                std::to_string(u));
  }
  return TreeAccess::rotate(g, t, t.subtree_masks(), TreeAccess::children_masks(t), u, v);
}

std::vector<Neighbor> rotation_neighbors(const Graph& g, const ElimTree& t) {
  const auto sub = t.subtree_masks();
  const auto kids = TreeAccess::children_masks(t);
  std::vector<Neighbor> out;
  out.reserve(static_cast<std::size_t>(t.size()));
  for_each_vertex(t.vertices(), [&](Vertex v) {
    if (v == t.root()) return;
    const Vertex u = t.parent(v);
    out.push_back({TreeAccess::rotate(g, t, sub, kids, u, v),
                   {static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v)}});
  });
  return out;
}

// --- RotationGraph ---------------------------------------------------------------

RotationGraph::RotationGraph(const Graph& g, BuildOptions options) : graph_(g) {
  const int n = g.order();
  if (n > ElimTree::kMaxVertices) throw std::invalid_argument("graph too large for rotation graphs");
  if (!is_connected(g)) throw std::invalid_argument("graph is not connected");

  std::vector<Vertex> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  const ElimTree seed = tree_from_order(g, identity);
  trees_.push_back(seed);
  index_.emplace(TreeAccess::packed(seed), 0);
  offsets_.push_back(0);

  struct Entry {
    Ordinal target;
    RotatedPair pair;
  };
  struct Fresh {
    TreeKey key;
    std::size_t slot;
  };
  std::vector<Entry> row;
  std::vector<Neighbor> fresh_trees;
  std::vector<Fresh> fresh;
  constexpr Ordinal kPending = ~Ordinal{0};

  labeled_ = options.edge_labels;
  for (std::size_t o = 0; o < trees_.size(); ++o) {
    row.clear();
    fresh_trees.clear();
    fresh.clear();
    for (auto& nb : rotation_neighbors(g, trees_[o])) {
      const auto it = index_.find(TreeAccess::packed(nb.tree));
      if (it != index_.end()) {
        row.push_back({it->second, nb.pair});
      } else {
        fresh.push_back({nb.tree.key(), fresh_trees.size()});
        row.push_back({kPending, nb.pair});
        fresh_trees.push_back(std::move(nb));
      }
    }
    // New trees get ordinals in TreeKey order; duplicates among them are
    // parallel rotations and share one ordinal.
    std::sort(fresh.begin(), fresh.end(), [](const Fresh& a, const Fresh& b) { return a.key < b.key; });
    std::vector<Ordinal> assigned(fresh_trees.size(), kPending);
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      const auto& tree = fresh_trees[fresh[k].slot].tree;
      if (k > 0 && fresh[k].key == fresh[k - 1].key) {
        assigned[fresh[k].slot] = assigned[fresh[k - 1].slot];
        continue;
      }
      const auto ord = static_cast<Ordinal>(trees_.size());
      trees_.push_back(tree);
      index_.emplace(TreeAccess::packed(tree), ord);
      assigned[fresh[k].slot] = ord;
      if (trees_.size() > options.max_trees) throw CapExceeded(options.max_trees, trees_.size());
    }
    std::size_t pending = 0;
    for (auto& e : row) {
      if (e.target == kPending) e.target = assigned[pending++];
    }
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.target < b.target; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0 && row[k].target == row[k - 1].target) {
        if (parallel_rotations_++ == 0) {
          std::cerr << "warning: two tree edges of tree " << o << " give the same rotation\n";
        }
        continue;
      }
      targets_.push_back(row[k].target);
      if (options.edge_labels) labels_.push_back(row[k].pair);
    }
    offsets_.push_back(targets_.size());
  }
}

std::optional<Ordinal> RotationGraph::find(const ElimTree& t) const {
  if (t.universe() != graph_.order() || t.vertices() != graph_.vertices()) return std::nullopt;
  const auto it = index_.find(TreeAccess::packed(t));
  if (it == index_.end() || !(trees_[it->second] == t)) return std::nullopt;
  return it->second;
}

Ordinal RotationGraph::at(const ElimTree& t) const {
  const auto o = find(t);
  if (!o) throw std::out_of_range("tree " + t.to_string() + " is not a vertex of the rotation graph");
  return *o;
}

std::span<const RotatedPair> RotationGraph::labels(Ordinal o) const {
  if (!has_labels()) throw std::logic_error("rotation graph was built without edge labels");
  return {labels_.data() + offsets_[o], labels_.data() + offsets_[o + 1]};
}

bool RotationGraph::adjacent(Ordinal a, Ordinal b) const {
  const auto row = neighbors(a);
  return std::binary_search(row.begin(), row.end(), b);
}

RotatedPair RotationGraph::label(Ordinal a, Ordinal b) const {
  const auto row = neighbors(a);
  const auto it = std::lower_bound(row.begin(), row.end(), b);
  if (it == row.end() || *it != b) {
    throw std::invalid_argument("trees " + std::to_string(a) + " and " + std::to_string(b) +
                                " are not adjacent");
  }
  return labels(a)[static_cast<std::size_t>(it - row.begin())];
}

RotationGraph build_rotation_graph(const Graph& g, BuildOptions options) {
  return RotationGraph(g, options);
}

std::vector<ElimTree> trees_from_all_orders(const Graph& g) {
  const int n = g.order();
  if (n > 10) throw std::invalid_argument("order enumeration is limited to 10 vertices");
  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<TreeKey> keys;
  do {
    keys.push_back(tree_from_order(g, order).key());
  } while (std::next_permutation(order.begin(), order.end()));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<ElimTree> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(ElimTree::from_key(k));
  return out;
}

}  // namespace rotgraph
