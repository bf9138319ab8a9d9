#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rotgraph {

using Vertex = int;
using VertexMask = std::uint32_t;

inline constexpr VertexMask bit(Vertex v) { return VertexMask{1} << v; }

template <typename F>
void for_each_vertex(VertexMask set, F&& f) {
  while (set != 0) {
    const Vertex v = std::countr_zero(set);
    set &= set - 1;
    f(v);
  }
}

// Simple undirected graph on the dense vertex set 0..n-1 with neighbor
// sets stored as bit masks. Values are immutable once built.
class Graph {
 public:
  static constexpr int kMaxVertices = 32;

  using Edge = std::pair<Vertex, Vertex>;

  explicit Graph(int n);
  Graph(int n, std::span<const Edge> edges, std::vector<std::string> labels = {});

  int order() const { return static_cast<int>(adj_.size()); }
  VertexMask vertices() const;
  VertexMask neighbors(Vertex v) const;
  VertexMask closed_neighbors(Vertex v) const { return neighbors(v) | bit(v); }
  bool adjacent(Vertex u, Vertex v) const;
  int degree(Vertex v) const;
  std::size_t edge_count() const;
  // Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const;

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  // Display name; falls back to the decimal id when no labels are set.
  std::string label(Vertex v) const;

  void check_vertex(Vertex v) const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.adj_ == b.adj_; }

 private:
  std::vector<VertexMask> adj_;
  std::vector<std::string> labels_;
};

// --- predicates -----------------------------------------------------------

bool is_clique(const Graph& g, VertexMask set);
bool is_independent(const Graph& g, VertexMask set);
bool is_true_twin_set(const Graph& g, VertexMask set);
bool is_universal(const Graph& g, Vertex v);
bool is_simplicial(const Graph& g, Vertex v);
bool is_complete(const Graph& g);
bool is_connected(const Graph& g);

// Connected components of g restricted to `within`, each as a vertex mask,
// ordered by smallest member.
std::vector<VertexMask> connected_components(const Graph& g, VertexMask within);
std::vector<VertexMask> connected_components(const Graph& g);
// Component of `within` containing `start`.
VertexMask component_of(const Graph& g, VertexMask within, Vertex start);

// --- families ---------------------------------------------------------------

enum class Family { complete, path, star, complete_bipartite, complete_split, threshold };

struct FamilySpec {
  Family kind = Family::complete;
  std::vector<int> params;
  // Creation word for threshold graphs: 'i' adds an isolated vertex, 'u' a
  // universal vertex, both applied to a single starting vertex.
  std::string word;

  std::string to_string() const;
};

// Parses the `name:params` mini-grammar: complete:n, path:n, star:q,
// kpq:p,q, spk:p,q, threshold:<word over i/u>.
FamilySpec parse_family_spec(std::string_view text);

Graph make_family(Family kind, std::span<const int> params);
Graph make_family(const FamilySpec& spec);
Graph complete_graph(int n);
Graph path_graph(int n);
Graph star_graph(int leaves);
// Vertices x_1..x_p get ids 0..p-1, y_1..y_q get ids p..p+q-1.
Graph complete_bipartite(int p, int q);
Graph complete_split(int p, int q);
// Throws when `require_connected` is set and the word does not end with 'u'.
Graph threshold_graph(std::string_view word, bool require_connected = true);

// Vertex masks of the P side of K_{p,q} / SPK_{p,q}.
inline VertexMask split_clique_side(int p) { return bit(p) - 1; }

// --- operations -------------------------------------------------------------
// Each operation appends the new vertex with id order().

Graph add_simplicial(const Graph& g, VertexMask clique);
Graph add_true_twin(const Graph& g, Vertex v);
Graph add_false_twin(const Graph& g, Vertex v);
// G - S where S = E(G[W]) for a set W of true twins.
Graph delete_twin_edges(const Graph& g, VertexMask twins);

// --- IO -----------------------------------------------------------------------

// {"n": int, "edges": [[u,v], ...], "labels": [...]?}
std::string graph_to_json(const Graph& g);
Graph graph_from_json(std::string_view text);
// One "u v" pair per line; '#' starts a comment; "# n <count>" fixes the order.
std::string graph_to_edge_list(const Graph& g);
Graph graph_from_edge_list(std::string_view text);
// Dispatches on the file extension (.json, otherwise edge list).
Graph load_graph_file(const std::string& path);

std::string mask_to_string(const Graph& g, VertexMask set);

}  // namespace rotgraph
