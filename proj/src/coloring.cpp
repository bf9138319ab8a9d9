#include "rotgraph/coloring.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace rotgraph {

int Coloring::max_color() const {
  int m = -1;
  for (auto a : assign) m = std::max(m, static_cast<int>(a));
  return m;
}

Report check_proper(const RotationGraph& rg, const Coloring& c) {
  Report r("proper_coloring", std::to_string(c.k) + " colors on " + std::to_string(rg.size()) + " trees");
  if (c.assign.size() != rg.size()) {
    r.fail("coloring has " + std::to_string(c.assign.size()) + " entries for " + std::to_string(rg.size()) +
           " trees");
    return r;
  }
  for (Ordinal a = 0; a < rg.size(); ++a) {
    r.expect(c.assign[a] < c.k, [&] { return "tree " + std::to_string(a) + " has color outside the palette"; });
    for (Ordinal b : rg.neighbors(a)) {
      if (b < a) continue;
      r.expect(c.assign[a] != c.assign[b], [&] {
        return "edge " + rg.tree(a).to_string() + " - " + rg.tree(b).to_string() + " has both ends colored " +
               std::to_string(c.assign[a]);
      });
    }
  }
  r.stats["edges"] = static_cast<std::int64_t>(rg.edge_count());
  return r;
}

bool is_proper(const RotationGraph& rg, const Coloring& c) { return check_proper(rg, c).passed; }

Coloring sign_coloring(const RotationGraph& rg) {
  if (!is_complete(rg.graph())) throw std::invalid_argument("sign coloring needs a complete graph");
  Coloring c{2, std::vector<std::uint8_t>(rg.size())};
  for (Ordinal o = 0; o < rg.size(); ++o) {
    const auto order = rg.tree(o).path_order();
    int inversions = 0;
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b) inversions += order[a] > order[b];
    c.assign[o] = static_cast<std::uint8_t>(inversions % 2);
  }
  return c;
}

std::optional<std::array<Ordinal, 5>> five_cycle_witness(const RotationGraph& rg) {
  const Graph& g = rg.graph();
  if (g.order() < 3) throw std::invalid_argument("five_cycle_witness needs at least three vertices");
  if (!is_connected(g)) throw std::invalid_argument("five_cycle_witness needs a connected graph");
  for (Vertex b = 0; b < g.order(); ++b) {
    const VertexMask nb = g.neighbors(b);
    for (Vertex a = 0; a < g.order(); ++a) {
      if (!(nb & bit(a))) continue;
      for (Vertex c = a + 1; c < g.order(); ++c) {
        if (!(nb & bit(c)) || g.adjacent(a, c)) continue;
        std::vector<Vertex> prefix;
        for (Vertex v = 0; v < g.order(); ++v)
          if (v != a && v != b && v != c) prefix.push_back(v);
        auto tree = [&](Vertex x, Vertex y, Vertex z) {
          auto order = prefix;
          order.insert(order.end(), {x, y, z});
          return rg.at(tree_from_order(g, order));
        };
        // The sixth order b,a,c gives the same tree as b,c,a.
        const std::array<Ordinal, 5> cycle = {tree(a, b, c), tree(a, c, b), tree(c, a, b), tree(c, b, a),
                                              tree(b, c, a)};
        for (int k = 0; k < 5; ++k) {
          if (!rg.adjacent(cycle[k], cycle[(k + 1) % 5])) {
            throw std::logic_error("five-cycle construction produced non-adjacent trees");
          }
        }
        return cycle;
      }
    }
  }
  return std::nullopt;
}

std::optional<std::array<Ordinal, 5>> find_five_cycle(const RotationGraph& rg) {
  // Canonical form: the smallest ordinal first.
  for (Ordinal s = 0; s < rg.size(); ++s) {
    for (Ordinal a : rg.neighbors(s)) {
      if (a <= s) continue;
      for (Ordinal b : rg.neighbors(a)) {
        if (b <= s || b == a) continue;
        for (Ordinal c : rg.neighbors(b)) {
          if (c <= s || c == a || c == b) continue;
          for (Ordinal d : rg.neighbors(c)) {
            if (d <= s || d == a || d == b || d == c) continue;
            if (rg.adjacent(d, s)) return std::array<Ordinal, 5>{s, a, b, c, d};
          }
        }
      }
    }
  }
  return std::nullopt;
}

// --- lifts ---------------------------------------------------------------------

namespace {

void check_base(const FamilyTable& table, const Coloring& c, Mode mode) {
  if (table.extension().mode() != mode) {
    throw std::invalid_argument("family table is for a " + to_string(table.extension().mode()) + " extension");
  }
  if (c.k < 3) throw std::invalid_argument("lifts need a palette of at least 3 colors");
  const Report r = check_proper(table.small(), c);
  if (!r.passed) {
    throw std::invalid_argument("base coloring is not proper: " + (r.witnesses.empty() ? "" : r.witnesses[0]));
  }
}

template <typename F>
Coloring lift(const FamilyTable& table, const Coloring& c, F&& rule) {
  const auto& ext = table.extension();
  Coloring out{c.k, std::vector<std::uint8_t>(table.big().size())};
  for (Ordinal t = 0; t < table.small().size(); ++t) {
    const auto fam = table.family(t);
    const int size = static_cast<int>(fam.size());
    for (int p = 0; p < size; ++p) {
      if (fam[p] == FamilyTable::kNone) throw std::logic_error("family member missing from the rotation graph");
      const int shift = rule(ext.slot(p, size), p, size);
      out.assign[fam[p]] = static_cast<std::uint8_t>((c.assign[t] + shift) % c.k);
    }
  }
  return out;
}

int twin_shift(const Slot& s) { return (s.i % 2 == 0) == (s.j == 1) ? 0 : 1; }

}  // namespace

Coloring lift_coloring_simplicial(const FamilyTable& table, const Coloring& c) {
  check_base(table, c, Mode::simplicial);
  const auto& ext = table.extension();
  for_each_vertex(ext.clique(), [&](Vertex v) {
    if (!is_universal(ext.small(), v)) throw std::invalid_argument("K must consist of universal vertices");
  });
  return lift(table, c, [](const Slot& s, int p, int size) { return p == size - 1 ? 2 : s.i % 2; });
}

Coloring lift_coloring_true_twin(const FamilyTable& table, const Coloring& c) {
  check_base(table, c, Mode::true_twin);
  const auto& ext = table.extension();
  if (!is_universal(ext.small(), ext.twin())) throw std::invalid_argument("v must be universal");
  return lift(table, c, [](const Slot& s, int, int) { return twin_shift(s); });
}

bool false_twin_lift_applies(const Graph& g, Vertex v) {
  g.check_vertex(v);
  const VertexMask nv = g.neighbors(v);
  bool ok = true;
  for_each_vertex(g.vertices() & ~nv, [&](Vertex u) { ok = ok && g.neighbors(u) == nv; });
  return ok;
}

Coloring lift_coloring_false_twin(const FamilyTable& table, const Coloring& c) {
  check_base(table, c, Mode::false_twin);
  const auto& ext = table.extension();
  if (!false_twin_lift_applies(ext.small(), ext.twin())) {
    throw std::invalid_argument("some vertex outside N(v) has a neighbourhood other than N(v)");
  }
  return lift(table, c, [](const Slot& s, int, int) { return s.wedge ? 2 : twin_shift(s); });
}

Coloring lift_coloring(const FamilyTable& table, const Coloring& c) {
  switch (table.extension().mode()) {
    case Mode::simplicial: return lift_coloring_simplicial(table, c);
    case Mode::true_twin: return lift_coloring_true_twin(table, c);
    case Mode::false_twin: return lift_coloring_false_twin(table, c);
  }
  throw std::logic_error("unknown mode");
}

// --- exact chromatic number ----------------------------------------------------------

namespace {

using Adjacency = std::vector<std::vector<Ordinal>>;

// DSATUR with backtracking for a fixed palette of k colours. Uncoloured
// vertices sit in buckets keyed by saturation, then by uncoloured degree
// (rotation graphs are regular, so static degree breaks no ties).
class Dsatur {
 public:
  enum class Outcome { found, impossible, budget };

  Dsatur(const Adjacency& adj, int k, int max_degree)
      : adj_(adj), k_(k), span_(max_degree + 1), n_(adj.size()), color_(n_, -1),
        count_(n_ * static_cast<std::size_t>(k), 0), sat_(n_, 0), free_(n_, 0), pos_(n_, 0),
        buckets_(static_cast<std::size_t>(k + 1) * span_) {
    for (Ordinal v = 0; v < n_; ++v) {
      free_[v] = static_cast<int>(adj[v].size());
      insert(v);
    }
  }

  Outcome run(std::uint64_t budget) {
    struct Frame {
      Ordinal v;
      int tried;
      int limit;
      int prev_max;
    };
    std::vector<Frame> stack;
    std::size_t colored = 0;
    int max_used = -1;
    while (true) {
      if (colored == n_) return Outcome::found;
      const Ordinal v = pick();
      remove(v);
      stack.push_back({v, -1, std::min(k_ - 1, max_used + 1), max_used});
      while (true) {
        Frame& f = stack.back();
        if (f.tried >= 0) {
          unassign(f.v);
          --colored;
          max_used = f.prev_max;
        }
        int c = f.tried + 1;
        while (c <= f.limit && count_[index(f.v, c)] != 0) ++c;
        if (c <= f.limit) {
          if (++nodes_ > budget) return Outcome::budget;
          f.tried = c;
          const bool wiped = assign(f.v, c);
          ++colored;
          max_used = std::max(f.prev_max, c);
          if (!wiped) break;
          continue;
        }
        insert(f.v);
        stack.pop_back();
        if (stack.empty()) return Outcome::impossible;
      }
    }
  }

  std::vector<std::uint8_t> colors() const {
    std::vector<std::uint8_t> out(n_);
    for (std::size_t v = 0; v < n_; ++v) out[v] = static_cast<std::uint8_t>(color_[v]);
    return out;
  }
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::size_t index(Ordinal v, int c) const { return static_cast<std::size_t>(v) * k_ + c; }
  std::size_t key(Ordinal v) const { return static_cast<std::size_t>(sat_[v]) * span_ + free_[v]; }

  void insert(Ordinal v) {
    auto& b = buckets_[key(v)];
    pos_[v] = static_cast<Ordinal>(b.size());
    b.push_back(v);
    top_ = std::max(top_, key(v));
  }
  void remove(Ordinal v) {
    auto& b = buckets_[key(v)];
    const Ordinal last = b.back();
    b[pos_[v]] = last;
    pos_[last] = pos_[v];
    b.pop_back();
  }
  Ordinal pick() {
    while (buckets_[top_].empty()) --top_;
    return buckets_[top_].back();
  }

  // Returns true if some uncoloured neighbour has no colour left.
  bool assign(Ordinal v, int c) {
    color_[v] = c;
    bool wiped = false;
    for (Ordinal u : adj_[v]) {
      const bool first = count_[index(u, c)]++ == 0;
      if (color_[u] >= 0) {
        sat_[u] += first;
        --free_[u];
        continue;
      }
      remove(u);
      sat_[u] += first;
      --free_[u];
      insert(u);
      wiped = wiped || sat_[u] == k_;
    }
    return wiped;
  }
  void unassign(Ordinal v) {
    const int c = color_[v];
    color_[v] = -1;
    for (Ordinal u : adj_[v]) {
      const bool last = --count_[index(u, c)] == 0;
      if (color_[u] >= 0) {
        sat_[u] -= last;
        ++free_[u];
        continue;
      }
      remove(u);
      sat_[u] -= last;
      ++free_[u];
      insert(u);
    }
  }

  const Adjacency& adj_;
  int k_;
  std::size_t span_;
  std::size_t n_;
  std::vector<int> color_;
  std::vector<std::uint16_t> count_;
  std::vector<int> sat_;
  std::vector<int> free_;
  std::vector<Ordinal> pos_;
  std::vector<std::vector<Ordinal>> buckets_;
  std::size_t top_ = 0;
  std::uint64_t nodes_ = 0;
};

// Tabu search on the number of monochromatic edges with k colours, started
// from `start` (colours >= k are folded into the palette).
std::optional<std::vector<std::uint8_t>> tabu_search(const Adjacency& adj, int k, std::vector<std::uint8_t> col,
                                                     std::uint64_t iterations, std::mt19937_64& rng,
                                                     std::uint64_t& nodes) {
  const std::size_t n = adj.size();
  for (auto& c : col) {
    if (c >= k) c = static_cast<std::uint8_t>(rng() % static_cast<std::uint64_t>(k));
  }
  auto at = [k](Ordinal v, int c) { return static_cast<std::size_t>(v) * k + c; };
  std::vector<std::uint32_t> gamma(n * static_cast<std::size_t>(k), 0);
  std::vector<std::uint64_t> tabu(n * static_cast<std::size_t>(k), 0);
  std::int64_t conflicts = 0;
  for (Ordinal v = 0; v < n; ++v) {
    for (Ordinal u : adj[v]) {
      ++gamma[at(v, col[u])];
      if (u > v && col[u] == col[v]) ++conflicts;
    }
  }
  // Conflicting vertices, kept as an indexed set.
  std::vector<Ordinal> hot;
  std::vector<std::int64_t> where(n, -1);
  auto refresh = [&](Ordinal v) {
    const bool is_hot = gamma[at(v, col[v])] > 0;
    if (is_hot && where[v] < 0) {
      where[v] = static_cast<std::int64_t>(hot.size());
      hot.push_back(v);
    } else if (!is_hot && where[v] >= 0) {
      const Ordinal last = hot.back();
      hot[static_cast<std::size_t>(where[v])] = last;
      where[last] = where[v];
      hot.pop_back();
      where[v] = -1;
    }
  };
  for (Ordinal v = 0; v < n; ++v) refresh(v);
  for (std::uint64_t it = 1; it <= iterations; ++it) {
    if (conflicts == 0) return col;
    ++nodes;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    Ordinal best_v = 0;
    int best_c = -1;
    std::uint64_t ties = 0;
    for (Ordinal v : hot) {
      const auto here = static_cast<std::int64_t>(gamma[at(v, col[v])]);
      for (int c = 0; c < k; ++c) {
        if (c == col[v]) continue;
        const std::int64_t delta = static_cast<std::int64_t>(gamma[at(v, c)]) - here;
        // Aspiration: a tabu move is allowed if it reaches a new best.
        if (tabu[at(v, c)] >= it && conflicts + delta > 0) continue;
        if (delta < best) {
          best = delta;
          best_v = v;
          best_c = c;
          ties = 1;
        } else if (delta == best && rng() % ++ties == 0) {
          best_v = v;
          best_c = c;
        }
      }
    }
    if (best_c < 0) continue;
    const int old = col[best_v];
    col[best_v] = static_cast<std::uint8_t>(best_c);
    conflicts += best;
    tabu[at(best_v, old)] = it + static_cast<std::uint64_t>(0.6 * static_cast<double>(hot.size())) + rng() % 10;
    for (Ordinal u : adj[best_v]) {
      --gamma[at(u, old)];
      ++gamma[at(u, best_c)];
      refresh(u);
    }
    refresh(best_v);
  }
  if (conflicts == 0) return col;
  return std::nullopt;
}

std::optional<std::vector<std::uint8_t>> two_coloring(const Adjacency& adj) {
  std::vector<std::uint8_t> side(adj.size(), 2);
  std::queue<Ordinal> queue;
  for (Ordinal s = 0; s < adj.size(); ++s) {
    if (side[s] != 2) continue;
    side[s] = 0;
    queue.push(s);
    while (!queue.empty()) {
      const Ordinal v = queue.front();
      queue.pop();
      for (Ordinal u : adj[v]) {
        if (side[u] == 2) {
          side[u] = side[v] ^ 1;
          queue.push(u);
        } else if (side[u] == side[v]) {
          return std::nullopt;
        }
      }
    }
  }
  return side;
}

int greedy_clique(const Adjacency& adj) {
  auto adjacent = [&](Ordinal a, Ordinal b) {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  };
  int best = adj.empty() ? 0 : 1;
  for (Ordinal v = 0; v < adj.size(); ++v) {
    std::vector<Ordinal> clique{v};
    for (Ordinal u : adj[v]) {
      if (std::all_of(clique.begin(), clique.end(), [&](Ordinal w) { return adjacent(u, w); })) clique.push_back(u);
    }
    best = std::max(best, static_cast<int>(clique.size()));
  }
  return best;
}

}  // namespace

ChromaticResult chromatic_number_exact(const Adjacency& input, ChromaticOptions options) {
  Adjacency adj = input;
  std::size_t max_degree = 0;
  bool has_edge = false;
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    max_degree = std::max(max_degree, row.size());
    has_edge = has_edge || !row.empty();
  }
  ChromaticResult r;
  if (adj.empty()) {
    r.exact = true;
    return r;
  }
  if (!has_edge) {
    r = {1, 1, true, std::vector<std::uint8_t>(adj.size(), 0), 0};
    return r;
  }
  if (auto two = two_coloring(adj)) {
    r = {2, 2, true, std::move(*two), 0};
    return r;
  }
  r.lower = std::max(3, greedy_clique(adj));
  Dsatur greedy(adj, static_cast<int>(max_degree) + 1, static_cast<int>(max_degree));
  greedy.run(~std::uint64_t{0});
  r.certificate = greedy.colors();
  r.upper = 1 + *std::max_element(r.certificate.begin(), r.certificate.end());
  r.nodes = greedy.nodes();
  std::mt19937_64 rng(options.seed);
  while (r.lower < r.upper) {
    // Local search first: it finds colourings that chronological
    // backtracking misses; only the exhaustive search proves absence.
    if (auto found = tabu_search(adj, r.lower, r.certificate, options.local_iterations + 100 * adj.size(), rng, r.nodes)) {
      r.upper = r.lower;
      r.certificate = std::move(*found);
      break;
    }
    Dsatur search(adj, r.lower, static_cast<int>(max_degree));
    const auto outcome = search.run(options.budget);
    r.nodes += search.nodes();
    if (outcome == Dsatur::Outcome::budget) return r;
    if (outcome == Dsatur::Outcome::found) {
      r.upper = r.lower;
      r.certificate = search.colors();
      break;
    }
    ++r.lower;
  }
  r.exact = true;
  return r;
}

ChromaticResult chromatic_number_exact(const RotationGraph& rg, ChromaticOptions options) {
  Adjacency adj(rg.size());
  for (Ordinal o = 0; o < rg.size(); ++o) {
    const auto row = rg.neighbors(o);
    adj[o].assign(row.begin(), row.end());
  }
  return chromatic_number_exact(adj, options);
}

// --- constructions --------------------------------------------------------------------

namespace {

// Applies one extension to the running construction.
void extend(LiftedColoring& state, const Extension& ext) {
  RotationGraph big = build_rotation_graph(ext.big());
  const FamilyTable table(ext, state.rotation, big);
  Coloring lifted = lift_coloring(table, state.coloring);
  state.graph = ext.big();
  state.rotation = std::move(big);
  state.coloring = std::move(lifted);
}

LiftedColoring single_vertex() {
  const Graph k1 = complete_graph(1);
  return {k1, build_rotation_graph(k1), Coloring{3, {0}}, {0}};
}

}  // namespace

LiftedColoring threshold_coloring(std::string_view word) {
  const Graph target = threshold_graph(word);
  if (is_complete(target)) throw std::invalid_argument("threshold word gives a complete graph; R(K_n) is bipartite");
  LiftedColoring state = single_vertex();
  // Isolated letters wait for the next universal letter and then become
  // pendants at it; a universal letter is a true twin of the current
  // universal vertex.
  Vertex universal = 0;
  std::vector<Vertex> pending;
  for (std::size_t t = 0; t < word.size(); ++t) {
    const auto id = static_cast<Vertex>(t + 1);
    if (word[t] == 'i') {
      pending.push_back(id);
      continue;
    }
    extend(state, Extension::true_twin(state.graph, universal));
    universal = state.graph.order() - 1;
    state.original_ids.push_back(id);
    for (Vertex p : pending) {
      extend(state, Extension::simplicial(state.graph, bit(universal)));
      state.original_ids.push_back(p);
    }
    pending.clear();
  }
  return state;
}

LiftedColoring bipartite_coloring(int p, int q) {
  if (p < 1 || q < 1 || p + q < 3) throw std::invalid_argument("K_{p,q} needs p, q >= 1 and p + q >= 3");
  const bool swapped = q < 2;
  const int centers = swapped ? q : p;
  const int leaves = swapped ? p : q;
  // K_{1,2}: built from "iu" as 0 - 1 - 2 with centre 1.
  LiftedColoring state = threshold_coloring("iu");
  auto id_of = [&](bool center_side, int index) {
    const bool p_side = center_side != swapped;
    return static_cast<Vertex>(p_side ? index : p + index);
  };
  state.original_ids = {id_of(false, 0), id_of(true, 0), id_of(false, 1)};
  for (int c = 1; c < centers; ++c) {
    extend(state, Extension::false_twin(state.graph, 1));
    state.original_ids.push_back(id_of(true, c));
  }
  for (int l = 2; l < leaves; ++l) {
    extend(state, Extension::false_twin(state.graph, 0));
    state.original_ids.push_back(id_of(false, l));
  }
  return state;
}

std::string coloring_to_json(const Coloring& c) {
  std::ostringstream out;
  out << "{\"k\":" << c.k << ",\"colors\":[";
  for (std::size_t o = 0; o < c.assign.size(); ++o) out << (o ? "," : "") << static_cast<int>(c.assign[o]);
  out << "]}";
  return out.str();
}

}  // namespace rotgraph
