#include "rotgraph/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <stdexcept>

namespace rotgraph {

Graph::Graph(int n) {
  if (n < 1 || n > kMaxVertices) {
    throw std::invalid_argument("graph order must be in 1.." + std::to_string(kMaxVertices) +
                                ", got " + std::to_string(n));
  }
  adj_.assign(static_cast<std::size_t>(n), 0);
}

Graph::Graph(int n, std::span<const Edge> edges, std::vector<std::string> labels) : Graph(n) {
  for (auto [u, v] : edges) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    adj_[u] |= bit(v);
    adj_[v] |= bit(u);
  }
  if (!labels.empty() && labels.size() != adj_.size()) {
    throw std::invalid_argument("label count does not match vertex count");
  }
  labels_ = std::move(labels);
}

VertexMask Graph::vertices() const {
  return order() == 32 ? ~VertexMask{0} : bit(order()) - 1;
}

void Graph::check_vertex(Vertex v) const {
  if (v < 0 || v >= order()) {
    throw std::out_of_range("vertex " + std::to_string(v) + " not in graph of order " +
                            std::to_string(order()));
  }
}

VertexMask Graph::neighbors(Vertex v) const {
  check_vertex(v);
  return adj_[v];
}

bool Graph::adjacent(Vertex u, Vertex v) const { return (neighbors(u) & bit(v)) != 0; }

int Graph::degree(Vertex v) const { return std::popcount(neighbors(v)); }

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (VertexMask m : adj_) twice += static_cast<std::size_t>(std::popcount(m));
  return twice / 2;
}

std::vector<Graph::Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (Vertex u = 0; u < order(); ++u) {
    for (Vertex v = u + 1; v < order(); ++v) {
      if (adj_[u] & bit(v)) out.emplace_back(u, v);
    }
  }
  return out;
}

std::string Graph::label(Vertex v) const {
  check_vertex(v);
  return labels_.empty() ? std::to_string(v) : labels_[v];
}

// --- predicates -----------------------------------------------------------

namespace {

void check_mask(const Graph& g, VertexMask set) {
  if ((set & ~g.vertices()) != 0) throw std::out_of_range("vertex set exceeds graph order");
}

}  // namespace

bool is_clique(const Graph& g, VertexMask set) {
  check_mask(g, set);
  bool ok = true;
  for_each_vertex(set, [&](Vertex v) { ok = ok && ((set & ~g.closed_neighbors(v)) == 0); });
  return ok;
}

bool is_independent(const Graph& g, VertexMask set) {
  check_mask(g, set);
  bool ok = true;
  for_each_vertex(set, [&](Vertex v) { ok = ok && ((set & g.neighbors(v)) == 0); });
  return ok;
}

bool is_true_twin_set(const Graph& g, VertexMask set) {
  check_mask(g, set);
  if (set == 0) return true;
  const VertexMask first = g.closed_neighbors(std::countr_zero(set));
  bool ok = true;
  for_each_vertex(set, [&](Vertex v) { ok = ok && g.closed_neighbors(v) == first; });
  return ok;
}

bool is_universal(const Graph& g, Vertex v) { return g.closed_neighbors(v) == g.vertices(); }

bool is_simplicial(const Graph& g, Vertex v) { return is_clique(g, g.neighbors(v)); }

bool is_complete(const Graph& g) { return is_clique(g, g.vertices()); }

VertexMask component_of(const Graph& g, VertexMask within, Vertex start) {
  VertexMask seen = bit(start) & within;
  VertexMask frontier = seen;
  while (frontier != 0) {
    VertexMask next = 0;
    for_each_vertex(frontier, [&](Vertex v) { next |= g.neighbors(v); });
    next &= within & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

std::vector<VertexMask> connected_components(const Graph& g, VertexMask within) {
  check_mask(g, within);
  std::vector<VertexMask> out;
  VertexMask rest = within;
  while (rest != 0) {
    VertexMask comp = component_of(g, within, std::countr_zero(rest));
    out.push_back(comp);
    rest &= ~comp;
  }
  return out;
}

std::vector<VertexMask> connected_components(const Graph& g) {
  return connected_components(g, g.vertices());
}

bool is_connected(const Graph& g) { return component_of(g, g.vertices(), 0) == g.vertices(); }

// --- families ---------------------------------------------------------------

Graph complete_graph(int n) {
  std::vector<Graph::Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph(n, edges);
}

Graph path_graph(int n) {
  std::vector<Graph::Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, edges);
}

Graph star_graph(int leaves) {
  if (leaves < 1) throw std::invalid_argument("star needs at least one leaf");
  std::vector<Graph::Edge> edges;
  for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph(leaves + 1, edges);
}

namespace {

Graph split_like(int p, int q, bool clique_p) {
  if (p < 1 || q < 1) throw std::invalid_argument("p and q must be positive");
  std::vector<Graph::Edge> edges;
  std::vector<std::string> labels;
  for (int i = 0; i < p; ++i) labels.push_back("x" + std::to_string(i + 1));
  for (int j = 0; j < q; ++j) labels.push_back("y" + std::to_string(j + 1));
  if (clique_p) {
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) edges.emplace_back(a, b);
  }
  for (int a = 0; a < p; ++a)
    for (int j = 0; j < q; ++j) edges.emplace_back(a, p + j);
  return Graph(p + q, edges, std::move(labels));
}

}  // namespace

Graph complete_bipartite(int p, int q) { return split_like(p, q, false); }
Graph complete_split(int p, int q) { return split_like(p, q, true); }

Graph threshold_graph(std::string_view word, bool require_connected) {
  const int n = static_cast<int>(word.size()) + 1;
  std::vector<Graph::Edge> edges;
  for (int t = 1; t < n; ++t) {
    const char c = word[t - 1];
    if (c == 'u') {
      for (int s = 0; s < t; ++s) edges.emplace_back(s, t);
    } else if (c != 'i') {
      throw std::invalid_argument(std::string("threshold word letters must be 'i' or 'u', got '") +
                                  c + "'");
    }
  }
  if (require_connected && (word.empty() || word.back() != 'u')) {
    throw std::invalid_argument("threshold word must end with 'u' for a connected graph");
  }
  return Graph(n, edges);
}

Graph make_family(Family kind, std::span<const int> params) {
  auto need = [&](std::size_t count) {
    if (params.size() != count) {
      throw std::invalid_argument("family expects " + std::to_string(count) + " parameter(s)");
    }
    for (int p : params) {
      if (p <= 0) throw std::invalid_argument("family parameters must be positive");
    }
  };
  switch (kind) {
    case Family::complete: need(1); return complete_graph(params[0]);
    case Family::path: need(1); return path_graph(params[0]);
    case Family::star: need(1); return star_graph(params[0]);
    case Family::complete_bipartite: need(2); return complete_bipartite(params[0], params[1]);
    case Family::complete_split: need(2); return complete_split(params[0], params[1]);
    case Family::threshold: break;
  }
  throw std::invalid_argument("threshold graphs are built from a creation word");
}

Graph make_family(const FamilySpec& spec) {
  if (spec.kind == Family::threshold) return threshold_graph(spec.word, true);
  return make_family(spec.kind, spec.params);
}

std::string FamilySpec::to_string() const {
  std::string name;
  switch (kind) {
    case Family::complete: name = "complete"; break;
    case Family::path: name = "path"; break;
    case Family::star: name = "star"; break;
    case Family::complete_bipartite: name = "kpq"; break;
    case Family::complete_split: name = "spk"; break;
    case Family::threshold: return "threshold:" + word;
  }
  name += ':';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) name += ',';
    name += std::to_string(params[i]);
  }
  return name;
}

FamilySpec parse_family_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("family spec must look like name:params, got '" +
                                std::string(text) + "'");
  }
  const std::string_view name = text.substr(0, colon);
  std::string_view rest = text.substr(colon + 1);
  FamilySpec spec;
  if (name == "threshold") {
    spec.kind = Family::threshold;
    spec.word = std::string(rest);
    return spec;
  }
  if (name == "complete") spec.kind = Family::complete;
  else if (name == "path") spec.kind = Family::path;
  else if (name == "star") spec.kind = Family::star;
  else if (name == "kpq") spec.kind = Family::complete_bipartite;
  else if (name == "spk") spec.kind = Family::complete_split;
  else throw std::invalid_argument("unknown family '" + std::string(name) + "'");

  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("bad family parameter '" + std::string(tok) + "'");
    }
    spec.params.push_back(value);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return spec;
}

// --- operations -------------------------------------------------------------

namespace {

Graph extend(const Graph& g, VertexMask new_neighbors, const std::string& new_label) {
  auto edges = g.edges();
  const Vertex x = g.order();
  for_each_vertex(new_neighbors, [&](Vertex u) { edges.emplace_back(u, x); });
  std::vector<std::string> labels;
  if (g.has_labels()) {
    labels = g.labels();
    labels.push_back(new_label);
  }
  return Graph(g.order() + 1, edges, std::move(labels));
}

}  // namespace

Graph add_simplicial(const Graph& g, VertexMask clique) {
  if (clique == 0) throw std::invalid_argument("simplicial neighbourhood must be non-empty");
  if (!is_clique(g, clique)) throw std::invalid_argument("neighbourhood is not a clique");
  return extend(g, clique, "x");
}

Graph add_true_twin(const Graph& g, Vertex v) {
  g.check_vertex(v);
  return extend(g, g.closed_neighbors(v), g.label(v) + "'");
}

Graph add_false_twin(const Graph& g, Vertex v) {
  g.check_vertex(v);
  return extend(g, g.neighbors(v), g.label(v) + "'");
}

Graph delete_twin_edges(const Graph& g, VertexMask twins) {
  if (std::popcount(twins) < 2) throw std::invalid_argument("twin set needs at least two vertices");
  if (!is_true_twin_set(g, twins)) throw std::invalid_argument("vertex set is not a set of true twins");
  std::vector<Graph::Edge> kept;
  for (auto [u, v] : g.edges()) {
    if ((twins & bit(u)) && (twins & bit(v))) continue;
    kept.emplace_back(u, v);
  }
  return Graph(g.order(), kept, g.labels());
}

std::string mask_to_string(const Graph& g, VertexMask set) {
  std::string out = "{";
  bool first = true;
  for_each_vertex(set, [&](Vertex v) {
    if (!first) out += ',';
    out += g.label(v);
    first = false;
  });
  return out + "}";
}

}  // namespace rotgraph
