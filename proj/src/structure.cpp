#include "rotgraph/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace rotgraph {

namespace {

void require_valid(const Graph& g, const ElimTree& t, const char* what) {
  if (!validate(g, t)) {
    throw std::logic_error(std::string(what) + " produced " + t.to_string() + ", not a search tree");
  }
}

void require_tree_of(const Graph& g, const ElimTree& t) {
  if (t.universe() != g.order() || t.vertices() != g.vertices()) {
    throw std::invalid_argument("tree does not span the graph");
  }
}

std::vector<ElimTree> twin_family(const Graph& g, Vertex v, const ElimTree& t) {
  g.check_vertex(v);
  require_tree_of(g, t);
  const Vertex twin = g.order();
  const int k = t.depth(v);
  const auto swap = swap_permutation(g.order() + 1, v, twin);
  std::vector<ElimTree> first;
  for (int i = 0; i <= k; ++i) first.push_back(insert(t, i, twin, v));
  std::vector<ElimTree> out = first;
  for (int i = k; i >= 0; --i) out.push_back(relabel(first[static_cast<std::size_t>(i)], swap));
  return out;
}

}  // namespace

std::vector<ElimTree> family_Px(const Graph& g, VertexMask clique, const ElimTree& t) {
  if (clique == 0 || !is_clique(g, clique)) throw std::invalid_argument("K must be a non-empty clique");
  require_tree_of(g, t);
  const auto deep = deepest_in(t, clique);
  std::vector<ElimTree> out;
  for (int i = 0; i <= deep.level + 1; ++i) out.push_back(insert(t, i, g.order(), deep.vertex));
  return out;
}

std::vector<ElimTree> family_P(const Graph& g, Vertex v, const ElimTree& t) { return twin_family(g, v, t); }

std::vector<ElimTree> family_Ptilde(const Graph& g, Vertex v, const ElimTree& t) {
  auto out = twin_family(g, v, t);
  if (!t.is_leaf(v)) return out;
  if (v == t.root()) throw std::invalid_argument("a false twin of the only vertex is disconnected");
  const int k = t.depth(v);
  // T_wedge: v' becomes a second leaf under the parent of v.
  const ElimTree merged = insert(t, k, g.order(), t.parent(v));
  out.erase(out.begin() + k, out.begin() + k + 2);
  out.insert(out.begin() + k, merged);
  return out;
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::simplicial: return "simplicial";
    case Mode::true_twin: return "true_twin";
    case Mode::false_twin: return "false_twin";
  }
  return "?";
}

// --- Extension -----------------------------------------------------------------

Extension Extension::simplicial(const Graph& g, VertexMask clique) {
  Extension e(Mode::simplicial, g, add_simplicial(g, clique));
  e.clique_ = clique;
  return e;
}

Extension Extension::true_twin(const Graph& g, Vertex v) {
  Extension e(Mode::true_twin, g, add_true_twin(g, v));
  e.v_ = v;
  return e;
}

Extension Extension::false_twin(const Graph& g, Vertex v) {
  Extension e(Mode::false_twin, g, add_false_twin(g, v));
  e.v_ = v;
  return e;
}

std::vector<ElimTree> Extension::family(const ElimTree& t) const {
  std::vector<ElimTree> out;
  switch (mode_) {
    case Mode::simplicial: out = family_Px(small_, clique_, t); break;
    case Mode::true_twin: out = family_P(small_, v_, t); break;
    case Mode::false_twin: out = family_Ptilde(small_, v_, t); break;
  }
  for (const auto& m : out) require_valid(big_, m, "family construction");
  return out;
}

Vertex Extension::anchor(const ElimTree& t) const {
  return mode_ == Mode::simplicial ? deepest_in(t, clique_).vertex : v_;
}

Slot Extension::slot(int position, int family_size) const {
  if (mode_ == Mode::simplicial) return {position, 0, false};
  if (family_size % 2 == 0) {
    const int k = family_size / 2 - 1;
    return position <= k ? Slot{position, 1, false} : Slot{family_size - 1 - position, 2, false};
  }
  const int k = family_size / 2;
  if (position == k) return {k, 0, true};
  return position < k ? Slot{position, 1, false} : Slot{family_size - 1 - position, 2, false};
}

std::string Extension::describe() const {
  switch (mode_) {
    case Mode::simplicial: return "simplicial x over K=" + mask_to_string(small_, clique_);
    case Mode::true_twin: return "true twin of " + small_.label(v_);
    case Mode::false_twin: return "false twin of " + small_.label(v_);
  }
  return "?";
}

// --- FamilyTable -----------------------------------------------------------------

FamilyTable::FamilyTable(const Extension& ext, const RotationGraph& small, const RotationGraph& big)
    : ext_(ext), small_(&small), big_(&big) {
  if (!(small.graph() == ext.small()) || !(big.graph() == ext.big())) {
    throw std::invalid_argument("rotation graphs do not match the extension");
  }
  families_.resize(small.size());
  owner_.assign(big.size(), kNone);
  position_.assign(big.size(), -1);
  for (Ordinal t = 0; t < small.size(); ++t) {
    const auto members = ext.family(small.tree(t));
    auto& row = families_[t];
    for (std::size_t p = 0; p < members.size(); ++p) {
      const auto b = big.find(members[p]);
      row.push_back(b ? *b : kNone);
      if (!b) continue;
      if (owner_[*b] != kNone) {
        overlaps_.push_back(std::to_string(*b) + ":" + std::to_string(owner_[*b]) + ":" + std::to_string(t));
        continue;
      }
      owner_[*b] = t;
      position_[*b] = static_cast<int>(p);
    }
  }
}

Slot FamilyTable::slot(Ordinal big) const {
  const Ordinal t = owner_[big];
  if (t == kNone) throw std::out_of_range("tree is not covered by any family");
  return ext_.slot(position_[big], static_cast<int>(families_[t].size()));
}

Report verify_partition(const FamilyTable& table) {
  const auto& small = table.small();
  const auto& big = table.big();
  Report r("partition", table.extension().describe());
  for (const auto& o : table.overlaps()) r.fail("tree claimed by two families (big:owner:owner) " + o);
  std::size_t members = 0;
  for (Ordinal t = 0; t < small.size(); ++t) {
    const auto fam = table.family(t);
    members += fam.size();
    for (std::size_t p = 0; p < fam.size(); ++p) {
      r.expect(fam[p] != FamilyTable::kNone, [&] {
        return "member " + std::to_string(p) + " of the family of " + small.tree(t).to_string() +
               " is not a search tree of the extended graph";
      });
    }
    // Induced path: consecutive members adjacent, no other adjacency inside.
    for (std::size_t p = 0; p < fam.size(); ++p) {
      for (std::size_t q = p + 1; q < fam.size(); ++q) {
        if (fam[p] == FamilyTable::kNone || fam[q] == FamilyTable::kNone) continue;
        const bool adj = big.adjacent(fam[p], fam[q]);
        r.expect(adj == (q == p + 1), [&] {
          return "family of " + small.tree(t).to_string() + ": members " + std::to_string(p) + "," +
                 std::to_string(q) + (adj ? " adjacent" : " not adjacent");
        });
      }
    }
  }
  for (Ordinal b = 0; b < big.size(); ++b) {
    r.expect(table.owner(b) != FamilyTable::kNone,
             [&] { return "tree " + big.tree(b).to_string() + " is in no family"; });
  }
  r.expect(members == big.size(), [&] {
    return "family sizes sum to " + std::to_string(members) + ", expected " + std::to_string(big.size());
  });
  r.stats["families"] = static_cast<std::int64_t>(small.size());
  r.stats["trees"] = static_cast<std::int64_t>(big.size());
  return r;
}

// --- edge decomposition ----------------------------------------------------------------

namespace {

using PosPair = std::pair<int, int>;

struct Classified {
  std::string name;          // "1", "2a-i", "2a-ii", "2b", "2b-i", "2b-ii"
  bool flipped = false;      // classified from the second tree's side
  int level = 0;             // l for the 2(a) cases
};

// Case of the rotation of (upper, lower), upper the parent of lower in t.
std::optional<Classified> classify(const Extension& ext, const ElimTree& t, Vertex upper, Vertex lower,
                                   std::string& problem) {
  const Vertex w = ext.anchor(t);
  VertexMask path = 0;
  for (Vertex a : t.branch_to(w)) path |= bit(a);
  const bool up_in = path & bit(upper);
  const bool low_in = path & bit(lower);
  if (!up_in && !low_in) return Classified{"1"};
  if (!up_in && low_in) {
    problem = "rotation with the parent off and the child on the anchor path";
    return std::nullopt;
  }
  if (up_in && !low_in) return std::nullopt;  // seen from the other side
  if (lower == w) {
    if (ext.mode() != Mode::simplicial) return Classified{"2b"};
    return Classified{(ext.clique() & bit(upper)) ? "2b-i" : "2b-ii"};
  }
  VertexMask s = 0;
  for_each_vertex(t.children(lower), [&](Vertex c) {
    if (t.is_ancestor(c, w)) s = t.subtree(c);
  });
  const bool touches = (s & ext.small().neighbors(upper)) != 0;
  return Classified{touches ? "2a-i" : "2a-ii", false, t.depth(lower)};
}

// Predicted (i, j) pairs between the family of t (k = anchor depth) and the
// family of t'.
std::vector<std::pair<Slot, Slot>> predicted_slots(const Extension& ext, const Classified& c, int k) {
  std::vector<std::pair<Slot, Slot>> out;
  const bool simp = ext.mode() == Mode::simplicial;
  const std::vector<int> sides = simp ? std::vector<int>{0} : std::vector<int>{1, 2};
  const int top = simp ? k + 1 : k;  // last level of the family
  for (int j : sides) {
    auto add = [&](int i, int i2) { out.push_back({Slot{i, j, false}, Slot{i2, j, false}}); };
    if (c.name == "1") {
      for (int i = 0; i <= top; ++i) add(i, i);
    } else if (c.name == "2a-i") {
      for (int i = 0; i <= top; ++i)
        if (i != c.level) add(i, i);
    } else if (c.name == "2a-ii") {
      for (int i = 0; i < c.level; ++i) add(i, i);
      for (int i = c.level; i < top; ++i) add(i + 1, i);
    } else if (c.name == "2b") {
      for (int i = 0; i < k; ++i) add(i, i);
    } else if (c.name == "2b-i") {
      for (int i = 0; i < k; ++i) add(i, i);
      add(k + 1, k + 1);
    } else if (c.name == "2b-ii") {
      for (int i = 0; i < k; ++i) add(i, i);
      add(k + 1, k);
    }
  }
  return out;
}

// Position of a slot in a family of the given size; -1 if absent.
int position_of(const Extension& ext, const Slot& s, int size) {
  for (int p = 0; p < size; ++p) {
    const Slot q = ext.slot(p, size);
    if (q.wedge && s.j != 0 && 2 * s.i + 1 == size) return p;  // T(k,j) -> T_wedge
    if (!q.wedge && q.i == s.i && q.j == s.j) return p;
  }
  return -1;
}

}  // namespace

Report verify_edge_decomposition(const FamilyTable& table) {
  const auto& ext = table.extension();
  const auto& small = table.small();
  const auto& big = table.big();
  Report r("edge_decomposition", ext.describe());
  if (!small.has_labels()) throw std::invalid_argument("edge decomposition needs an edge-labeled R(G)");

  // Every edge of R(big) is a family path edge or joins families of adjacent trees.
  std::size_t inter = 0;
  for (Ordinal a = 0; a < big.size(); ++a) {
    for (Ordinal b : big.neighbors(a)) {
      if (b < a) continue;
      const Ordinal ta = table.owner(a);
      const Ordinal tb = table.owner(b);
      if (ta == FamilyTable::kNone || tb == FamilyTable::kNone) {
        r.fail("edge " + std::to_string(a) + "-" + std::to_string(b) + " has an uncovered endpoint");
        continue;
      }
      if (ta == tb) {
        r.count("path_edges");
        r.expect(std::abs(table.position(a) - table.position(b)) == 1, [&] {
          return "chord inside the family of " + small.tree(ta).to_string();
        });
        continue;
      }
      ++inter;
      r.expect(small.adjacent(ta, tb), [&] {
        return "edge " + big.tree(a).to_string() + " - " + big.tree(b).to_string() +
               " joins families of non-adjacent trees";
      });
      const Slot sa = table.slot(a);
      const Slot sb = table.slot(b);
      r.expect(std::abs(sa.i - sb.i) <= 1 && (sa.j == sb.j || sa.wedge || sb.wedge), [&] {
        return "edge " + big.tree(a).to_string() + " - " + big.tree(b).to_string() + " changes level by more than one";
      });
    }
  }
  r.stats["inter_edges"] = static_cast<std::int64_t>(inter);

  // Per edge of R(G): observed inter-family edges against the case prediction.
  const bool universal_anchor =
      ext.mode() == Mode::simplicial
          ? [&] {
              bool all = true;
              for_each_vertex(ext.clique(), [&](Vertex v) { all = all && is_universal(ext.small(), v); });
              return all;
            }()
          : is_universal(ext.small(), ext.twin());
  std::size_t matched = 0;
  for (Ordinal a = 0; a < small.size(); ++a) {
    const auto row = small.neighbors(a);
    for (std::size_t n = 0; n < row.size(); ++n) {
      const Ordinal b = row[n];
      if (b < a) continue;
      const RotatedPair pair = small.labels(a)[n];
      Ordinal from = a;
      Ordinal to = b;
      std::string problem;
      auto c = classify(ext, small.tree(a), pair.upper, pair.lower, problem);
      if (!c && problem.empty()) {
        from = b;
        to = a;
        c = classify(ext, small.tree(b), pair.lower, pair.upper, problem);
        if (c) c->flipped = true;
      }
      if (!c) {
        r.fail(small.tree(a).to_string() + " - " + small.tree(b).to_string() + ": " +
               (problem.empty() ? "no case applies" : problem));
        r.count("case3");
        continue;
      }
      r.count("case" + c->name);
      if (c->name == "2a-ii" && universal_anchor) {
        r.fail("5-cycle case with a universal anchor at " + small.tree(a).to_string());
      }
      const auto fam_from = table.family(from);
      const auto fam_to = table.family(to);
      const int k = small.tree(from).depth(ext.anchor(small.tree(from)));
      std::set<PosPair> expected;
      for (const auto& [s, s2] : predicted_slots(ext, *c, k)) {
        const int p = position_of(ext, s, static_cast<int>(fam_from.size()));
        const int q = position_of(ext, s2, static_cast<int>(fam_to.size()));
        if (p < 0 || q < 0) {
          r.fail("predicted slot outside the family for " + small.tree(from).to_string());
          continue;
        }
        expected.insert({p, q});
      }
      std::set<PosPair> observed;
      for (std::size_t p = 0; p < fam_from.size(); ++p) {
        if (fam_from[p] == FamilyTable::kNone) continue;
        for (Ordinal y : big.neighbors(fam_from[p])) {
          if (table.owner(y) == to) observed.insert({static_cast<int>(p), table.position(y)});
        }
      }
      matched += observed.size();
      r.count("eps_size_" + std::to_string(observed.size()));
      r.expect(observed == expected, [&] {
        std::string msg = "case " + c->name + " for " + small.tree(from).to_string() + " -> " +
                          small.tree(to).to_string() + ": observed {";
        for (auto [p, q] : observed) msg += "(" + std::to_string(p) + "," + std::to_string(q) + ")";
        msg += "} predicted {";
        for (auto [p, q] : expected) msg += "(" + std::to_string(p) + "," + std::to_string(q) + ")";
        return msg + "}";
      });
    }
  }
  r.expect(matched == inter, [&] {
    return "inter-family edges " + std::to_string(inter) + " vs per-edge total " + std::to_string(matched);
  });
  return r;
}

EmbeddedCopy embedded_copy(const FamilyTable& table, Anchor anchor) {
  const auto& small = table.small();
  const auto& big = table.big();
  EmbeddedCopy out;
  out.report = Report(anchor == Anchor::first ? "embedded_copy_first" : "embedded_copy_last",
                      table.extension().describe());
  auto& r = out.report;
  out.image.resize(small.size());
  std::vector<Ordinal> preimage(big.size(), FamilyTable::kNone);
  for (Ordinal t = 0; t < small.size(); ++t) {
    const auto fam = table.family(t);
    const Ordinal img = anchor == Anchor::first ? fam.front() : fam.back();
    out.image[t] = img;
    if (img == FamilyTable::kNone) {
      r.fail("image of " + small.tree(t).to_string() + " is not a search tree");
      continue;
    }
    r.expect(preimage[img] == FamilyTable::kNone, [&] { return "image of two trees coincides"; });
    preimage[img] = t;
  }
  if (!r.passed) return out;
  std::size_t small_edges = 0;
  for (Ordinal a = 0; a < small.size(); ++a) {
    for (Ordinal b : small.neighbors(a)) {
      if (b < a) continue;
      ++small_edges;
      r.expect(big.adjacent(out.image[a], out.image[b]), [&] {
        return "edge " + small.tree(a).to_string() + " - " + small.tree(b).to_string() + " not preserved";
      });
    }
  }
  std::size_t induced = 0;
  for (Ordinal a = 0; a < small.size(); ++a) {
    for (Ordinal y : big.neighbors(out.image[a])) {
      const Ordinal b = preimage[y];
      if (b == FamilyTable::kNone || b < a) continue;
      ++induced;
      r.expect(small.adjacent(a, b), [&] {
        return "induced edge " + big.tree(out.image[a]).to_string() + " - " + big.tree(y).to_string() +
               " has non-adjacent preimages";
      });
    }
  }
  r.expect(induced == small_edges, [&] {
    return "induced subgraph has " + std::to_string(induced) + " edges, R(G) has " + std::to_string(small_edges);
  });
  r.stats["vertices"] = static_cast<std::int64_t>(small.size());
  r.stats["edges"] = static_cast<std::int64_t>(induced);
  return out;
}

// --- W-special trees ----------------------------------------------------------------

Special is_W_special(const Graph& g, VertexMask twins, const ElimTree& t) {
  if (std::popcount(twins) < 2 || !is_true_twin_set(g, twins)) {
    throw std::invalid_argument("W must be a set of at least two true twins");
  }
  require_tree_of(g, t);
  // W is a clique, so it lies on one branch and has at most one leaf.
  Vertex leaf = ElimTree::kNone;
  for_each_vertex(twins, [&](Vertex w) {
    if (t.is_leaf(w)) leaf = w;
  });
  if (leaf == ElimTree::kNone) return {};
  VertexMask chain = bit(leaf);
  Vertex top = leaf;
  while (top != t.root() && (twins & bit(t.parent(top)))) {
    top = t.parent(top);
    chain |= bit(top);
  }
  if (top == t.root() || std::popcount(chain) < 2) return {};
  return {true, chain, t.parent(top)};
}

ElimTree wedge(const ElimTree& t, const Special& s) {
  if (!s.special) throw std::invalid_argument("tree is not W-special");
  std::vector<int> parent(static_cast<std::size_t>(t.universe()));
  for (Vertex v = 0; v < t.universe(); ++v) {
    parent[v] = v == t.root() ? ElimTree::kNone : (s.chain & bit(v)) ? s.hinge : t.parent(v);
  }
  return ElimTree::from_parents(parent);
}

ElimTree project(const Graph& g, VertexMask twins, const ElimTree& t) {
  const Special s = is_W_special(g, twins, t);
  const ElimTree out = s.special ? wedge(t, s) : t;
  require_valid(delete_twin_edges(g, twins), out, "projection");
  return out;
}

// --- quotient map ----------------------------------------------------------------------

namespace {

std::size_t factorial(int m) {
  std::size_t f = 1;
  for (int k = 2; k <= m; ++k) f *= static_cast<std::size_t>(k);
  return f;
}

// Top-down order of the chain of a special tree.
std::vector<Vertex> chain_order(const ElimTree& t, const Special& s) {
  std::vector<Vertex> out;
  for_each_vertex(s.chain, [&](Vertex v) { out.push_back(v); });
  std::sort(out.begin(), out.end(), [&](Vertex a, Vertex b) { return t.depth(a) < t.depth(b); });
  return out;
}

}  // namespace

QuotientMap build_quotient(const RotationGraph& source, VertexMask twins, const RotationGraph& target) {
  const Graph& g = source.graph();
  const Graph reduced = delete_twin_edges(g, twins);
  if (!(target.graph() == reduced)) throw std::invalid_argument("target is not R(G - S)");

  QuotientMap q;
  q.source = &source;
  q.target = &target;
  q.twins = twins;
  q.report = Report("quotient", "W=" + mask_to_string(g, twins));
  auto& r = q.report;

  constexpr Ordinal kNone = ~Ordinal{0};
  std::vector<Special> special(source.size());
  q.map.assign(source.size(), kNone);
  for (Ordinal o = 0; o < source.size(); ++o) {
    const ElimTree& t = source.tree(o);
    special[o] = is_W_special(g, twins, t);
    const ElimTree image = special[o].special ? wedge(t, special[o]) : t;
    const auto found = target.find(image);
    if (!found) {
      r.fail("pi(" + t.to_string() + ") = " + image.to_string() + " is not a search tree on G - S");
      continue;
    }
    q.map[o] = *found;
  }
  if (!r.passed) return q;

  // Surjectivity and fiber sizes.
  std::vector<std::vector<Ordinal>> fibers(target.size());
  for (Ordinal o = 0; o < source.size(); ++o) fibers[q.map[o]].push_back(o);
  std::map<int, RotationGraph> permutohedra;
  for (Ordinal u = 0; u < target.size(); ++u) {
    const auto& fiber = fibers[u];
    if (fiber.empty()) {
      r.fail("target " + target.tree(u).to_string() + " has an empty fiber");
      continue;
    }
    r.count("fiber_size_" + std::to_string(fiber.size()));
    // W-leaves of the target grouped by parent.
    const ElimTree& ut = target.tree(u);
    std::map<Vertex, int> groups;
    for_each_vertex(twins, [&](Vertex w) {
      if (ut.is_leaf(w) && w != ut.root()) ++groups[ut.parent(w)];
    });
    std::size_t predicted = 1;
    int largest = 1;
    for (auto [parent, count] : groups) {
      if (twins & bit(parent)) continue;
      predicted *= factorial(count);
      largest = std::max(largest, count);
    }
    r.expect(fiber.size() == predicted, [&] {
      return "fiber of " + ut.to_string() + " has " + std::to_string(fiber.size()) + " trees, expected " +
             std::to_string(predicted);
    });
    if (fiber.size() < 2 || fiber.size() != predicted) continue;

    // Fiber subgraph against R(K_m) through the chain order.
    const int m = largest;
    auto it = permutohedra.find(m);
    if (it == permutohedra.end()) it = permutohedra.emplace(m, build_rotation_graph(complete_graph(m))).first;
    const RotationGraph& perm = it->second;
    std::vector<Ordinal> as_perm(fiber.size(), kNone);
    std::set<Ordinal> hit;
    for (std::size_t k = 0; k < fiber.size(); ++k) {
      const Special& s = special[fiber[k]];
      if (!s.special || std::popcount(s.chain) != m) {
        r.fail("fiber member " + source.tree(fiber[k]).to_string() + " lacks a chain of " + std::to_string(m));
        continue;
      }
      std::vector<Vertex> order = chain_order(source.tree(fiber[k]), s);
      std::vector<Vertex> sorted = order;
      std::sort(sorted.begin(), sorted.end());
      for (auto& v : order) v = static_cast<Vertex>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
      as_perm[k] = perm.at(ElimTree::path(order));
      hit.insert(as_perm[k]);
    }
    r.expect(hit.size() == perm.size(), [&] { return "fiber of " + ut.to_string() + " is not a copy of R(K_m)"; });
    for (std::size_t a = 0; a < fiber.size(); ++a) {
      for (std::size_t b = a + 1; b < fiber.size(); ++b) {
        if (as_perm[a] == kNone || as_perm[b] == kNone) continue;
        r.expect(source.adjacent(fiber[a], fiber[b]) == perm.adjacent(as_perm[a], as_perm[b]), [&] {
          return "fiber of " + ut.to_string() + ": adjacency differs from R(K_m)";
        });
      }
    }
  }

  // Quotient law; special edges are exactly the collapsed ones.
  std::vector<Ordinal> uf(source.size());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](Ordinal x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::vector<char> target_hit(target.edge_count() * 2, 0);
  std::size_t special_edges = 0;
  for (Ordinal a = 0; a < source.size(); ++a) {
    const auto row = source.neighbors(a);
    for (std::size_t n = 0; n < row.size(); ++n) {
      const Ordinal b = row[n];
      if (b < a) continue;
      const RotatedPair p = source.labels(a)[n];
      const bool is_special = special[a].special && special[b].special &&
                              special[a].chain == special[b].chain &&
                              (special[a].chain & bit(p.upper)) && (special[a].chain & bit(p.lower));
      const Ordinal ua = q.map[a];
      const Ordinal ub = q.map[b];
      if (is_special) {
        ++special_edges;
        uf[find(a)] = find(b);
        r.expect(ua == ub, [&] { return "special edge " + source.tree(a).to_string() + " not collapsed"; });
        continue;
      }
      if (ua == ub) {
        r.fail("non-special edge " + source.tree(a).to_string() + " - " + source.tree(b).to_string() + " collapsed");
        continue;
      }
      const auto trow = target.neighbors(ua);
      const auto pos = std::lower_bound(trow.begin(), trow.end(), ub);
      if (pos == trow.end() || *pos != ub) {
        r.fail("edge " + source.tree(a).to_string() + " - " + source.tree(b).to_string() +
               " maps to a non-edge");
        continue;
      }
      target_hit[static_cast<std::size_t>(&*pos - target.neighbors(0).data())] = 1;
      const auto back = target.neighbors(ub);
      const auto pos2 = std::lower_bound(back.begin(), back.end(), ua);
      target_hit[static_cast<std::size_t>(&*pos2 - target.neighbors(0).data())] = 1;
    }
  }
  // Contraction: special-edge components are the fibers, and every target edge is hit.
  std::set<Ordinal> classes;
  for (Ordinal o = 0; o < source.size(); ++o) classes.insert(find(o));
  r.expect(classes.size() == target.size(), [&] {
    return "contracting special edges leaves " + std::to_string(classes.size()) + " classes, R(G-S) has " +
           std::to_string(target.size()) + " trees";
  });
  const auto missed = static_cast<std::size_t>(std::count(target_hit.begin(), target_hit.end(), 0));
  r.expect(missed == 0, [&] { return std::to_string(missed / 2) + " edges of R(G-S) are not images"; });
  r.stats["special_edges"] = static_cast<std::int64_t>(special_edges);
  r.stats["source_trees"] = static_cast<std::int64_t>(source.size());
  r.stats["target_trees"] = static_cast<std::int64_t>(target.size());
  return q;
}

}  // namespace rotgraph
