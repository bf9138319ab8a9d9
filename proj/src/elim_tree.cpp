#include "rotgraph/elim_tree.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rotgraph {

namespace {

constexpr std::int8_t kAbsent = -2;
constexpr int kNone = ElimTree::kNone;

std::string id(Vertex v) { return std::to_string(v); }

}  // namespace

// --- TreeKey ------------------------------------------------------------------

TreeKey::TreeKey(const ElimTree& tree) : size_(static_cast<std::uint8_t>(tree.universe())) {
  for (Vertex v = 0; v < tree.universe(); ++v) {
    if (!tree.contains(v)) bytes_[v] = kAbsentByte;
    else if (v == tree.root()) bytes_[v] = kRootByte;
    else bytes_[v] = static_cast<std::uint8_t>(tree.parent(v));
  }
}

std::string TreeKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : bytes()) {
    out += kDigits[b >> 4];
    out += kDigits[b & 15];
  }
  return out;
}

std::uint64_t TreeKey::packed() const {
  std::uint64_t word = 0;
  for (std::size_t v = 0; v < size_; ++v) {
    const std::uint8_t b = bytes_[v];
    if (b == kAbsentByte) throw std::logic_error("packed key requires a spanning tree");
    const std::uint64_t nibble = b == kRootByte ? v : b;
    word |= nibble << (4 * v);
  }
  return word;
}

// --- ElimTree -----------------------------------------------------------------

void ElimTree::check_member(Vertex v) const {
  if (!contains(v)) throw std::out_of_range("vertex " + id(v) + " is not in the tree");
}

void ElimTree::normalize() {
  universe_ = present_ == 0 ? 0 : static_cast<std::int8_t>(32 - std::countl_zero(present_));
  for (Vertex v = 0; v < kMaxVertices; ++v) {
    if (!(present_ & bit(v))) parent_[v] = kAbsent;
  }
}

ElimTree ElimTree::from_parents(std::span<const int> parent) {
  if (parent.empty() || parent.size() > static_cast<std::size_t>(kMaxVertices)) {
    throw std::invalid_argument("tree size must be in 1.." + std::to_string(kMaxVertices));
  }
  ElimTree t;
  t.parent_.fill(kAbsent);
  const int n = static_cast<int>(parent.size());
  for (Vertex v = 0; v < n; ++v) {
    const int p = parent[v];
    if (p == kAbsent) continue;
    t.present_ |= bit(v);
    if (p == kNone) {
      if (t.root_ != kNone) throw std::invalid_argument("tree has more than one root");
      t.root_ = static_cast<std::int8_t>(v);
      t.parent_[v] = kNone;
    } else if (p < 0 || p >= n || p == v) {
      throw std::invalid_argument("bad parent " + id(p) + " for vertex " + id(v));
    } else {
      t.parent_[v] = static_cast<std::int8_t>(p);
    }
  }
  if (t.root_ == kNone) throw std::invalid_argument("tree has no root");
  for (Vertex v = 0; v < n; ++v) {
    if (!(t.present_ & bit(v)) || v == t.root_) continue;
    if (!(t.present_ & bit(t.parent_[v]))) {
      throw std::invalid_argument("parent of vertex " + id(v) + " is not in the tree");
    }
    // Every vertex must reach the root within n steps.
    Vertex w = v;
    int steps = 0;
    while (w != t.root_ && steps <= n) {
      w = t.parent_[w];
      ++steps;
    }
    if (w != t.root_) throw std::invalid_argument("parent relation has a cycle");
  }
  t.normalize();
  return t;
}

ElimTree ElimTree::path(std::span<const Vertex> order) {
  if (order.empty()) throw std::invalid_argument("path needs at least one vertex");
  const int n = 1 + *std::max_element(order.begin(), order.end());
  std::vector<int> parent(static_cast<std::size_t>(n), kAbsent);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (parent[order[k]] != kAbsent) throw std::invalid_argument("repeated vertex in path");
    parent[order[k]] = k == 0 ? kNone : order[k - 1];
  }
  return from_parents(parent);
}

ElimTree ElimTree::from_key(const TreeKey& key) {
  std::vector<int> parent;
  for (auto b : key.bytes()) {
    parent.push_back(b == TreeKey::kRootByte ? kNone : b == TreeKey::kAbsentByte ? kAbsent : b);
  }
  return from_parents(parent);
}

int ElimTree::size() const { return std::popcount(present_); }

Vertex ElimTree::parent(Vertex v) const {
  check_member(v);
  return parent_[v];
}

VertexMask ElimTree::children(Vertex v) const {
  check_member(v);
  VertexMask out = 0;
  for (Vertex w = 0; w < universe_; ++w) {
    if (parent_[w] == v) out |= bit(w);
  }
  return out;
}

int ElimTree::depth(Vertex v) const {
  check_member(v);
  int d = 0;
  while (v != root_) {
    v = parent_[v];
    ++d;
  }
  return d;
}

int ElimTree::height() const {
  int h = 0;
  for_each_vertex(present_, [&](Vertex v) { h = std::max(h, depth(v)); });
  return h;
}

VertexMask ElimTree::subtree(Vertex v) const {
  check_member(v);
  VertexMask out = 0;
  for_each_vertex(present_, [&](Vertex w) {
    if (is_ancestor(v, w)) out |= bit(w);
  });
  return out;
}

std::array<VertexMask, ElimTree::kMaxVertices> ElimTree::subtree_masks() const {
  std::array<VertexMask, kMaxVertices> out{};
  std::array<std::int8_t, kMaxVertices> order{};
  std::array<int, kMaxVertices> depth_of{};
  int count = 0;
  for_each_vertex(present_, [&](Vertex v) {
    depth_of[v] = depth(v);
    order[count++] = static_cast<std::int8_t>(v);
  });
  std::sort(order.begin(), order.begin() + count,
            [&](std::int8_t a, std::int8_t b) { return depth_of[a] > depth_of[b]; });
  for (int k = 0; k < count; ++k) {
    const Vertex v = order[k];
    out[v] |= bit(v);
    if (v != root_) out[parent_[v]] |= out[v];
  }
  return out;
}

bool ElimTree::is_ancestor(Vertex u, Vertex v) const {
  check_member(u);
  check_member(v);
  while (true) {
    if (v == u) return true;
    if (v == root_) return false;
    v = parent_[v];
  }
}

std::vector<Vertex> ElimTree::branch_to(Vertex v) const {
  check_member(v);
  std::vector<Vertex> out;
  for (Vertex w = v;; w = parent_[w]) {
    out.push_back(w);
    if (w == root_) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<VertexMask> ElimTree::levels() const {
  std::vector<VertexMask> out;
  for_each_vertex(present_, [&](Vertex v) {
    const auto d = static_cast<std::size_t>(depth(v));
    if (out.size() <= d) out.resize(d + 1, 0);
    out[d] |= bit(v);
  });
  return out;
}

std::vector<Vertex> ElimTree::path_order() const {
  std::vector<Vertex> out;
  if (root_ == kNone) return out;
  Vertex v = root_;
  while (true) {
    out.push_back(v);
    const VertexMask ch = children(v);
    if (ch == 0) break;
    if (std::popcount(ch) > 1) return {};
    v = std::countr_zero(ch);
  }
  return out;
}

std::string ElimTree::to_string() const {
  const auto order = path_order();
  if (!order.empty()) {
    std::string out;
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k && universe_ > 10) out += '-';
      out += id(order[k]);
    }
    return out;
  }
  return key().hex();
}

std::string ElimTree::to_string(const Graph& g) const {
  const auto order = path_order();
  if (order.empty()) return key().hex();
  bool short_labels = true;
  for (Vertex v : order) short_labels = short_labels && g.label(v).size() == 1;
  std::string out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k && !short_labels) out += '-';
    out += g.label(order[k]);
  }
  return out;
}

// --- construction and validity ---------------------------------------------------

ElimTree tree_from_order(const Graph& g, std::span<const Vertex> order) {
  const int n = g.order();
  if (n > ElimTree::kMaxVertices) throw std::invalid_argument("graph too large for search trees");
  if (static_cast<int>(order.size()) != n) throw std::invalid_argument("order is not a permutation");
  VertexMask seen = 0;
  for (Vertex v : order) {
    g.check_vertex(v);
    if (seen & bit(v)) throw std::invalid_argument("order is not a permutation");
    seen |= bit(v);
  }
  if (!is_connected(g)) throw std::invalid_argument("graph is not connected");

  // Process the order backwards: each vertex becomes the parent of the
  // current component roots it touches among the later vertices.
  std::vector<int> parent(static_cast<std::size_t>(n), kNone);
  std::vector<Vertex> comp_root(static_cast<std::size_t>(n));
  std::iota(comp_root.begin(), comp_root.end(), 0);
  auto find = [&](Vertex v) {
    while (comp_root[v] != v) {
      comp_root[v] = comp_root[comp_root[v]];
      v = comp_root[v];
    }
    return v;
  };
  VertexMask done = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex w = *it;
    for_each_vertex(g.neighbors(w) & done, [&](Vertex y) {
      const Vertex r = find(y);
      if (r != w) {
        parent[r] = w;
        comp_root[r] = w;
      }
    });
    done |= bit(w);
  }
  return ElimTree::from_parents(parent);
}

bool validate(const Graph& g, const ElimTree& t) {
  if (t.universe() != g.order() || t.vertices() != g.vertices()) {
    throw std::invalid_argument("tree vertex set does not match the graph");
  }
  if (!is_connected(g)) return false;
  const auto levels = t.levels();
  std::vector<VertexMask> above(levels.size() + 1, 0);
  for (std::size_t d = 0; d < levels.size(); ++d) above[d + 1] = above[d] | levels[d];
  bool ok = true;
  for_each_vertex(t.vertices(), [&](Vertex v) {
    if (!ok || v == t.root()) return;
    const VertexMask rest = g.vertices() & ~above[static_cast<std::size_t>(t.depth(v))];
    ok = component_of(g, rest, v) == t.subtree(v);
  });
  return ok;
}

// --- insertion / elimination / relabeling ------------------------------------------

ElimTree insert(const ElimTree& t, int level, Vertex x, Vertex v) {
  if (!t.contains(v)) throw std::out_of_range("insertion anchor " + id(v) + " is not in the tree");
  if (x < 0 || x >= ElimTree::kMaxVertices) throw std::out_of_range("new vertex id out of range");
  if (t.contains(x)) throw std::invalid_argument("vertex " + id(x) + " is already in the tree");
  const auto branch = t.branch_to(v);
  const int d = static_cast<int>(branch.size()) - 1;
  if (level < 0 || level > d + 1) {
    throw std::out_of_range("insertion level " + std::to_string(level) + " outside 0.." +
                            std::to_string(d + 1));
  }
  std::vector<int> parent(static_cast<std::size_t>(std::max(t.universe(), x + 1)), kAbsent);
  for_each_vertex(t.vertices(), [&](Vertex w) { parent[w] = w == t.root() ? kNone : t.parent(w); });
  if (level == 0) {
    parent[x] = kNone;
    parent[t.root()] = x;
  } else if (level == d + 1) {
    parent[x] = v;
  } else {
    parent[x] = branch[level - 1];
    parent[branch[level]] = x;
  }
  return ElimTree::from_parents(parent);
}

ElimTree eliminate(const ElimTree& t, Vertex u) {
  if (!t.contains(u)) throw std::out_of_range("vertex " + id(u) + " is not in the tree");
  const VertexMask ch = t.children(u);
  if (std::popcount(ch) > 1) {
    throw std::invalid_argument("cannot eliminate vertex " + id(u) + " with two or more children");
  }
  if (t.size() == 1) throw std::invalid_argument("cannot eliminate the only vertex");
  std::vector<int> parent(static_cast<std::size_t>(t.universe()), kAbsent);
  for_each_vertex(t.vertices(), [&](Vertex w) { parent[w] = w == t.root() ? kNone : t.parent(w); });
  if (ch != 0) parent[std::countr_zero(ch)] = parent[u];
  parent[u] = kAbsent;
  return ElimTree::from_parents(parent);
}

std::vector<Vertex> swap_permutation(int size, Vertex a, Vertex b) {
  std::vector<Vertex> f(static_cast<std::size_t>(size));
  std::iota(f.begin(), f.end(), 0);
  std::swap(f.at(a), f.at(b));
  return f;
}

ElimTree relabel(const ElimTree& t, std::span<const Vertex> f) {
  const int n = static_cast<int>(f.size());
  if (n < t.universe()) throw std::invalid_argument("relabeling does not cover the tree");
  VertexMask image = 0;
  for (Vertex v : f) {
    if (v < 0 || v >= n || (image & bit(v))) throw std::invalid_argument("relabeling is not a bijection");
    image |= bit(v);
  }
  std::vector<int> parent(static_cast<std::size_t>(n), kAbsent);
  for_each_vertex(t.vertices(), [&](Vertex w) {
    parent[f[w]] = w == t.root() ? kNone : f[t.parent(w)];
  });
  return ElimTree::from_parents(parent);
}

DeepestClique deepest_in(const ElimTree& t, VertexMask clique) {
  if (clique == 0) throw std::invalid_argument("clique must be non-empty");
  DeepestClique out;
  out.level = -1;
  for_each_vertex(clique, [&](Vertex v) {
    const int d = t.depth(v);
    if (d > out.level) out = {d, v};
  });
  for_each_vertex(clique, [&](Vertex v) {
    if (!t.is_ancestor(v, out.vertex)) {
      throw std::invalid_argument("clique vertices are not on a common branch");
    }
  });
  return out;
}

// --- JSON ---------------------------------------------------------------------------

std::string tree_to_json(const ElimTree& t) {
  nlohmann::json j;
  j["root"] = t.root();
  nlohmann::json parents = nlohmann::json::array();
  for (Vertex v = 0; v < t.universe(); ++v) {
    if (!t.contains(v)) throw std::invalid_argument("JSON trees must span 0..n-1");
    if (v == t.root()) parents.push_back(nullptr);
    else parents.push_back(t.parent(v));
  }
  j["parent"] = std::move(parents);
  return j.dump();
}

ElimTree tree_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("tree JSON: ") + e.what());
  }
  if (!j.contains("parent") || !j["parent"].is_array()) {
    throw std::invalid_argument("tree JSON: missing 'parent' array");
  }
  std::vector<int> parent;
  for (const auto& p : j["parent"]) parent.push_back(p.is_null() ? kNone : p.get<int>());
  ElimTree t = ElimTree::from_parents(parent);
  if (j.contains("root") && j["root"].get<int>() != t.root()) {
    throw std::invalid_argument("tree JSON: 'root' disagrees with the parent array");
  }
  return t;
}

ElimTree load_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tree file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return tree_from_json(buf.str());
}

}  // namespace rotgraph
