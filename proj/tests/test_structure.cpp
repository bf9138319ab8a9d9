#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "rotgraph/structure.hpp"
#include "support.hpp"

using namespace rotgraph;
using testsupport::make_graph;
using testsupport::mask_of;

namespace {

ElimTree path_tree(std::initializer_list<Vertex> order) {
  std::vector<Vertex> o(order);
  return ElimTree::path(o);
}

ElimTree parents_tree(std::initializer_list<int> parents) {
  std::vector<int> p(parents);
  return ElimTree::from_parents(p);
}

std::vector<Graph> corpus() {
  std::vector<Graph> out;
  for (int n = 1; n <= 5; ++n) {
    for (const auto& g : testsupport::connected_graphs(n)) out.push_back(g);
  }
  return out;
}

std::vector<VertexMask> cliques(const Graph& g) {
  std::vector<VertexMask> out;
  for (VertexMask m = 1; m < (VertexMask{1} << g.order()); ++m) {
    if (is_clique(g, m)) out.push_back(m);
  }
  return out;
}

std::vector<Extension> extensions(const Graph& g) {
  std::vector<Extension> out;
  for (VertexMask k : cliques(g)) out.push_back(Extension::simplicial(g, k));
  for (Vertex v = 0; v < g.order(); ++v) {
    out.push_back(Extension::true_twin(g, v));
    if (g.order() > 1) out.push_back(Extension::false_twin(g, v));
  }
  return out;
}

// Owner of a big tree, recomputed without the family construction: remove
// the upper of the two new-vertex positions and give the survivor its old
// name.
ElimTree owner_oracle(const Extension& ext, const ElimTree& big) {
  const Vertex x = ext.added();
  if (ext.mode() == Mode::simplicial) return eliminate(big, x);
  const Vertex v = ext.twin();
  if (big.is_ancestor(x, v)) return eliminate(big, x);
  if (big.is_ancestor(v, x)) return relabel(eliminate(big, v), swap_permutation(x + 1, v, x));
  return eliminate(big, x);
}

ElimTree shrink(const ElimTree& t, int universe) {
  std::vector<int> p(static_cast<std::size_t>(universe));
  for (Vertex v = 0; v < universe; ++v) p[v] = v == t.root() ? -1 : t.parent(v);
  return ElimTree::from_parents(p);
}

}  // namespace

TEST_CASE("family members on the 4-cycle") {
  // a, b, c, v = 0, 1, 2, 3 on the cycle a-b-c-v-a; v' = 4.
  const Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const ElimTree t = parents_tree({-1, 2, 0, 2});
  REQUIRE(validate(g, t));
  const auto fam = family_P(g, 3, t);
  REQUIRE(fam.size() == 6);
  // Listed with v on top: T(0,1), T(1,1), T(2,1), T(2,2), T(1,2), T(0,2).
  const std::vector<ElimTree> drawn = {
      parents_tree({3, 2, 0, -1, 2}), parents_tree({-1, 2, 3, 0, 2}), parents_tree({-1, 2, 0, 2, 3}),
      parents_tree({-1, 2, 0, 4, 2}), parents_tree({-1, 2, 4, 2, 0}), parents_tree({4, 2, 0, 2, -1}),
  };
  // The drawing names by v on top; the family names by v' on top, so the
  // sequences are reverses of each other.
  CHECK(std::equal(fam.begin(), fam.end(), drawn.rbegin()));
  const Graph big = add_true_twin(g, 3);
  for (const auto& m : fam) CHECK(validate(big, m));
  CHECK(fam.front() == insert(t, 0, 4, 3));
}

TEST_CASE("family_Px on K_3 covers R(K_4)") {
  const Graph k3 = complete_graph(3);
  const auto ext = Extension::simplicial(k3, 0b111);
  const auto small = build_rotation_graph(k3);
  const auto big = build_rotation_graph(ext.big());
  const FamilyTable table(ext, small, big);
  CHECK(small.size() == 6);
  for (Ordinal t = 0; t < small.size(); ++t) CHECK(table.family(t).size() == 4);
  const Report part = verify_partition(table);
  CHECK_MESSAGE(part.passed, part.to_json());
  const Report dec = verify_edge_decomposition(table);
  CHECK_MESSAGE(dec.passed, dec.to_json());
  CHECK(dec.stats.count("case2a-ii") == 0);
  // 6 paths of 3 edges plus the remaining edges of the 3-regular R(K_4).
  CHECK(dec.stats.at("path_edges") == 18);
  CHECK(dec.stats.at("inter_edges") == 36 - 18);
}

TEST_CASE("family_Px rejects a non-clique and family_Ptilde a lone vertex") {
  const Graph p3 = path_graph(3);
  const ElimTree t = tree_from_order(p3, std::vector<Vertex>{1, 0, 2});
  CHECK_THROWS_AS(family_Px(p3, mask_of({0, 2}), t), std::invalid_argument);
  CHECK_THROWS_AS(family_Px(p3, 0, t), std::invalid_argument);
  CHECK_THROWS_AS(family_Ptilde(complete_graph(1), 0, path_tree({0})), std::invalid_argument);
}

TEST_CASE("false twin of a leaf merges the middle pair") {
  const Graph p3 = path_graph(3);
  const ElimTree full = tree_from_order(p3, std::vector<Vertex>{1, 0, 2});
  const auto fam = family_Ptilde(p3, 2, full);
  // d = 1: T(0,1), T_wedge, T(0,2).
  REQUIRE(fam.size() == 3);
  CHECK(fam[1].parent(2) == 1);
  CHECK(fam[1].parent(3) == 1);
  const auto ext = Extension::false_twin(p3, 2);
  CHECK(ext.slot(1, 3).wedge);
  CHECK(ext.slot(2, 3).j == 2);
  CHECK(ext.slot(2, 3).i == 0);
}

TEST_CASE("slots of the twin families") {
  const auto ext = Extension::true_twin(complete_graph(2), 0);
  // Size 6: k = 2.
  CHECK(ext.slot(0, 6).i == 0);
  CHECK(ext.slot(2, 6).j == 1);
  CHECK(ext.slot(3, 6).i == 2);
  CHECK(ext.slot(3, 6).j == 2);
  CHECK(ext.slot(5, 6).i == 0);
  const auto simp = Extension::simplicial(complete_graph(2), 0b11);
  CHECK(simp.slot(3, 4).i == 3);
  CHECK(simp.slot(3, 4).j == 0);
}

TEST_CASE("families partition the extension, checked against an owner oracle") {
  for (const auto& g : corpus()) {
    const auto small = build_rotation_graph(g);
    for (const auto& ext : extensions(g)) {
      const auto big = build_rotation_graph(ext.big());
      const FamilyTable table(ext, small, big);
      const Report r = verify_partition(table);
      CHECK_MESSAGE(r.passed, r.to_json());
      for (Ordinal b = 0; b < big.size(); ++b) {
        const ElimTree parent = shrink(owner_oracle(ext, big.tree(b)), g.order());
        const auto expected = small.find(parent);
        REQUIRE(expected);
        CHECK(table.owner(b) == *expected);
      }
      if (ext.mode() == Mode::simplicial) {
        // Simplicial families are indexed by the level of x.
        for (Ordinal b = 0; b < big.size(); ++b) CHECK(table.position(b) == big.tree(b).depth(ext.added()));
      }
    }
  }
}

TEST_CASE("inter-family edges follow the case analysis") {
  std::map<std::string, std::int64_t> totals;
  for (const auto& g : corpus()) {
    const auto small = build_rotation_graph(g);
    for (const auto& ext : extensions(g)) {
      const auto big = build_rotation_graph(ext.big());
      const FamilyTable table(ext, small, big);
      const Report r = verify_edge_decomposition(table);
      CHECK_MESSAGE(r.passed, (ext.describe() + " " + r.to_json()));
      // Edge count of R(big) = path edges + inter-family edges.
      std::int64_t path = r.stats.count("path_edges") ? r.stats.at("path_edges") : 0;
      std::int64_t inter = r.stats.count("inter_edges") ? r.stats.at("inter_edges") : 0;
      CHECK(static_cast<std::size_t>(path + inter) == big.edge_count());
      for (const auto& [k, v] : r.stats) totals[to_string(ext.mode()) + ":" + k] += v;
    }
  }
  // The corpus reaches the 5-cycle case in every mode.
  CHECK(totals["simplicial:case2a-ii"] > 0);
  CHECK(totals["true_twin:case2a-ii"] > 0);
  CHECK(totals["false_twin:case2a-ii"] > 0);
  CHECK(totals["simplicial:case2b-ii"] > 0);
  CHECK(totals.count("simplicial:case3") == 0);
}

TEST_CASE("universal anchors never produce the 5-cycle case") {
  for (const auto& g : corpus()) {
    const auto small = build_rotation_graph(g);
    for (Vertex v = 0; v < g.order(); ++v) {
      if (!is_universal(g, v)) continue;
      const auto ext = Extension::true_twin(g, v);
      const auto big = build_rotation_graph(ext.big());
      const Report r = verify_edge_decomposition(FamilyTable(ext, small, big));
      CHECK(r.passed);
      CHECK(r.stats.count("case2a-ii") == 0);
    }
  }
}

TEST_CASE("embedded copies of R(G)") {
  for (const auto& g : corpus()) {
    const auto small = build_rotation_graph(g);
    for (const auto& ext : extensions(g)) {
      const auto big = build_rotation_graph(ext.big());
      const FamilyTable table(ext, small, big);
      for (Anchor a : {Anchor::first, Anchor::last}) {
        const auto copy = embedded_copy(table, a);
        CHECK_MESSAGE(copy.report.passed, copy.report.to_json());
        CHECK(copy.image.size() == small.size());
      }
    }
  }
}

TEST_CASE("R(K_3) sits inside R(K_4) as a hexagon") {
  const auto ext = Extension::simplicial(complete_graph(3), 0b111);
  const auto small = build_rotation_graph(ext.small());
  const auto big = build_rotation_graph(ext.big());
  const auto copy = embedded_copy(FamilyTable(ext, small, big), Anchor::last);
  REQUIRE(copy.report.passed);
  CHECK(copy.report.stats.at("edges") == 6);
  for (Ordinal b : copy.image) CHECK(big.tree(b).is_leaf(3));
}

TEST_CASE("W-special trees on SPK_{3,3}") {
  const Graph g = complete_split(3, 3);
  const VertexMask w = mask_of({0, 1, 2});
  const ElimTree r = path_tree({3, 4, 5, 0, 1, 2});
  const ElimTree s = path_tree({3, 4, 5, 0, 2, 1});
  const ElimTree t = parents_tree({-1, 3, 1, 0, 2, 2});
  const Special sr = is_W_special(g, w, r);
  const Special ss = is_W_special(g, w, s);
  CHECK(sr.special);
  CHECK(ss.special);
  CHECK(sr.chain == w);
  CHECK(ss.chain == w);
  CHECK(sr.hinge == 5);
  CHECK(ss.hinge == 5);
  CHECK_FALSE(is_W_special(g, w, t).special);
  CHECK(project(g, w, r) == project(g, w, s));
  CHECK(project(g, w, t) == t);
  // All three x-vertices hang under y3.
  const ElimTree pr = project(g, w, r);
  for (Vertex x : {0, 1, 2}) CHECK(pr.parent(x) == 5);

  CHECK_THROWS_AS(is_W_special(g, mask_of({0}), r), std::invalid_argument);
  CHECK_THROWS_AS(is_W_special(g, mask_of({0, 3}), r), std::invalid_argument);
  CHECK_THROWS_AS(wedge(t, Special{}), std::invalid_argument);
}

TEST_CASE("quotient of R(K_4) by the twins {3,4}") {
  // Labels 1..4 are ids 0..3.
  const Graph k4 = complete_graph(4);
  const VertexMask w = mask_of({2, 3});
  const ElimTree u1 = path_tree({0, 1, 2, 3});
  const ElimTree u2 = path_tree({0, 1, 3, 2});
  const ElimTree v1 = path_tree({1, 0, 2, 3});
  const ElimTree v2 = path_tree({1, 0, 3, 2});
  const ElimTree u = parents_tree({-1, 0, 1, 1});
  const ElimTree v = parents_tree({1, -1, 0, 0});
  CHECK(project(k4, w, u1) == u);
  CHECK(project(k4, w, u2) == u);
  CHECK(project(k4, w, v1) == v);
  CHECK(project(k4, w, v2) == v);

  const auto source = build_rotation_graph(k4);
  const auto target = build_rotation_graph(delete_twin_edges(k4, w));
  CHECK(target.size() == 22);
  const QuotientMap q = build_quotient(source, w, target);
  CHECK_MESSAGE(q.report.passed, q.report.to_json());
  CHECK(q.report.stats.at("fiber_size_1") == 20);
  CHECK(q.report.stats.at("fiber_size_2") == 2);
  CHECK(q.report.stats.at("special_edges") == 2);
  CHECK(q.map[source.at(u1)] == target.at(u));
  CHECK(q.map[source.at(v2)] == target.at(v));
}

TEST_CASE("quotient by every twin set of the corpus") {
  std::vector<Graph> graphs;
  for (int n = 2; n <= 5; ++n) {
    for (const auto& g : testsupport::connected_graphs(n)) graphs.push_back(g);
  }
  graphs.push_back(complete_split(3, 2));
  int checked = 0;
  std::set<std::int64_t> fiber_sizes;
  for (const auto& g : graphs) {
    const auto source = build_rotation_graph(g);
    for (VertexMask w = 1; w < (VertexMask{1} << g.order()); ++w) {
      if (std::popcount(w) < 2 || !is_true_twin_set(g, w)) continue;
      const Graph reduced = delete_twin_edges(g, w);
      if (!is_connected(reduced)) continue;
      const auto target = build_rotation_graph(reduced);
      const QuotientMap q = build_quotient(source, w, target);
      CHECK_MESSAGE(q.report.passed, (mask_to_string(g, w) + " " + q.report.to_json()));
      for (const auto& [k, v] : q.report.stats) {
        if (k.rfind("fiber_size_", 0) == 0) fiber_sizes.insert(std::stoll(k.substr(11)));
      }
      ++checked;
    }
  }
  CHECK(checked > 20);
  // K_4 with W of size 3 reaches a fiber of 3! trees.
  CHECK(fiber_sizes.count(6) == 1);
}

TEST_CASE("quotient rejects a mismatched target") {
  const Graph k3 = complete_graph(3);
  const auto source = build_rotation_graph(k3);
  const auto wrong = build_rotation_graph(path_graph(3));
  CHECK_THROWS_AS(build_quotient(source, mask_of({0, 1}), wrong), std::invalid_argument);
}
