#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "rotgraph/coloring.hpp"
#include "support.hpp"

using namespace rotgraph;
using testsupport::make_graph;

namespace {

using Adjacency = std::vector<std::vector<Ordinal>>;

Adjacency cycle(std::size_t n) {
  Adjacency adj(n);
  for (Ordinal v = 0; v < n; ++v) {
    adj[v].push_back(static_cast<Ordinal>((v + 1) % n));
    adj[(v + 1) % n].push_back(v);
  }
  return adj;
}

// Mycielskian of C_5: triangle-free with chromatic number 4.
Adjacency groetzsch() {
  Adjacency adj(11);
  auto edge = [&](Ordinal a, Ordinal b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (Ordinal i = 0; i < 5; ++i) {
    edge(i, (i + 1) % 5);
    edge(5 + i, (i + 4) % 5);
    edge(5 + i, (i + 1) % 5);
    edge(10, 5 + i);
  }
  return adj;
}

// Smallest k admitting a proper colouring, by trying every assignment.
int brute_chromatic(const Adjacency& adj) {
  const std::size_t n = adj.size();
  if (n == 0) return 0;
  for (int k = 1;; ++k) {
    std::vector<int> col(n, 0);
    while (true) {
      bool ok = true;
      for (std::size_t v = 0; v < n && ok; ++v)
        for (Ordinal u : adj[v]) ok = ok && col[v] != col[u];
      if (ok) return k;
      std::size_t p = 0;
      while (p < n && ++col[p] == k) col[p++] = 0;
      if (p == n) break;
    }
  }
}

bool proper(const Adjacency& adj, const std::vector<std::uint8_t>& col) {
  for (std::size_t v = 0; v < adj.size(); ++v)
    for (Ordinal u : adj[v])
      if (col[v] == col[u]) return false;
  return true;
}

Adjacency adjacency(const RotationGraph& rg) {
  Adjacency adj(rg.size());
  for (Ordinal o = 0; o < rg.size(); ++o) adj[o].assign(rg.neighbors(o).begin(), rg.neighbors(o).end());
  return adj;
}

std::vector<std::string> threshold_words(std::size_t max_len) {
  std::vector<std::string> out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << (len - 1)); ++bits) {
      std::string w;
      for (std::size_t k = 0; k + 1 < len; ++k) w += (bits >> k) & 1 ? 'u' : 'i';
      w += 'u';
      out.push_back(w);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("sign coloring of R(K_n)") {
  const auto rg = build_rotation_graph(complete_graph(4));
  const Coloring c = sign_coloring(rg);
  CHECK(c.assign[rg.at(ElimTree::path(std::vector<Vertex>{0, 1, 2, 3}))] == 0);
  CHECK(c.assign[rg.at(ElimTree::path(std::vector<Vertex>{1, 0, 2, 3}))] == 1);
  const Report r = check_proper(rg, c);
  CHECK(r.passed);
  CHECK(r.stats.at("edges") == 36);

  const auto k3 = build_rotation_graph(complete_graph(3));
  const Coloring c3 = sign_coloring(k3);
  CHECK(is_proper(k3, c3));
  CHECK(std::count(c3.assign.begin(), c3.assign.end(), 0) == 3);
  CHECK_THROWS_AS(sign_coloring(build_rotation_graph(path_graph(3))), std::invalid_argument);
}

TEST_CASE("check_proper reports monochromatic edges") {
  const auto rg = build_rotation_graph(path_graph(3));
  Coloring c{3, std::vector<std::uint8_t>(rg.size(), 0)};
  const Report r = check_proper(rg, c);
  CHECK_FALSE(r.passed);
  CHECK(r.violations == 5);
  CHECK_FALSE(is_proper(rg, Coloring{3, {0}}));
}

TEST_CASE("five-cycle witnesses") {
  const auto p3 = build_rotation_graph(path_graph(3));
  const auto w = five_cycle_witness(p3);
  REQUIRE(w);
  CHECK(std::set<Ordinal>(w->begin(), w->end()).size() == 5);
  CHECK(p3.size() == 5);

  CHECK_FALSE(five_cycle_witness(build_rotation_graph(complete_graph(4))));
  CHECK_FALSE(find_five_cycle(build_rotation_graph(complete_graph(4))));

  const auto spk = build_rotation_graph(complete_split(2, 2));
  const auto found = find_five_cycle(spk);
  REQUIRE(found);
  for (int k = 0; k < 5; ++k) CHECK(spk.adjacent((*found)[k], (*found)[(k + 1) % 5]));
  CHECK(five_cycle_witness(spk));

  CHECK_THROWS_AS(five_cycle_witness(build_rotation_graph(complete_graph(2))), std::invalid_argument);
}

TEST_CASE("complete graphs are exactly the bipartite rotation graphs") {
  for (int n = 3; n <= 5; ++n) {
    for (const auto& g : testsupport::connected_graphs(n)) {
      const auto rg = build_rotation_graph(g);
      const auto witness = five_cycle_witness(rg);
      const auto scan = find_five_cycle(rg);
      const auto chi = chromatic_number_exact(rg);
      CHECK(chi.exact);
      CHECK(witness.has_value() == !is_complete(g));
      CHECK(scan.has_value() == !is_complete(g));
      CHECK((chi.upper == 2) == is_complete(g));
      if (witness) {
        for (int k = 0; k < 5; ++k) CHECK(rg.adjacent((*witness)[k], (*witness)[(k + 1) % 5]));
      }
    }
  }
  for (int n = 2; n <= 6; ++n) {
    const auto chi = chromatic_number_exact(build_rotation_graph(complete_graph(n)));
    CHECK(chi.exact);
    CHECK(chi.upper == 2);
  }
}

TEST_CASE("exact chromatic number against brute force") {
  CHECK(chromatic_number_exact(Adjacency{}).upper == 0);
  CHECK(chromatic_number_exact(Adjacency(3)).upper == 1);
  for (std::size_t n = 3; n <= 9; ++n) {
    const auto r = chromatic_number_exact(cycle(n));
    CHECK(r.exact);
    CHECK(r.upper == brute_chromatic(cycle(n)));
    CHECK(proper(cycle(n), r.certificate));
  }
  Adjacency k5(5);
  for (Ordinal a = 0; a < 5; ++a)
    for (Ordinal b = 0; b < 5; ++b)
      if (a != b) k5[a].push_back(b);
  CHECK(chromatic_number_exact(k5).upper == 5);

  const auto g = groetzsch();
  const auto r = chromatic_number_exact(g);
  CHECK(r.exact);
  CHECK(r.upper == 4);
  CHECK(r.upper == brute_chromatic(g));
  CHECK(proper(g, r.certificate));

  // Random graphs on 8 vertices.
  std::mt19937_64 rng(testsupport::seed());
  for (int trial = 0; trial < 40; ++trial) {
    Adjacency adj(8);
    for (Ordinal a = 0; a < 8; ++a)
      for (Ordinal b = a + 1; b < 8; ++b)
        if (rng() % 2) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
    const auto res = chromatic_number_exact(adj);
    CHECK(res.exact);
    CHECK(res.upper == brute_chromatic(adj));
    CHECK(proper(adj, res.certificate));
  }
}

TEST_CASE("chromatic budget exhaustion is flagged") {
  const auto r = chromatic_number_exact(groetzsch(), ChromaticOptions{1});
  CHECK_FALSE(r.exact);
  CHECK(r.lower == 3);
  CHECK(r.upper >= 4);
  CHECK(proper(groetzsch(), r.certificate));
}

TEST_CASE("chromatic numbers of small rotation graphs") {
  CHECK(chromatic_number_exact(build_rotation_graph(complete_graph(4))).upper == 2);
  CHECK(chromatic_number_exact(build_rotation_graph(path_graph(3))).upper == 3);
  CHECK(chromatic_number_exact(build_rotation_graph(complete_split(2, 3))).upper == 3);
  // Cross-check with brute force on R(P_3) and R(SPK_{1,2}).
  const auto p3 = build_rotation_graph(path_graph(3));
  CHECK(brute_chromatic(adjacency(p3)) == 3);
}

TEST_CASE("simplicial lift on P_3 with K = {b}") {
  const Graph p3 = path_graph(3);
  const auto small = build_rotation_graph(p3);
  const auto chi = chromatic_number_exact(small);
  const Coloring c{chi.upper, chi.certificate};
  const auto ext = Extension::simplicial(p3, bit(1));
  const auto big = build_rotation_graph(ext.big());
  const FamilyTable table(ext, small, big);
  const Coloring lifted = lift_coloring_simplicial(table, c);
  CHECK(check_proper(big, lifted).passed);
  CHECK(lifted.max_color() == 2);
  for (Ordinal t = 0; t < small.size(); ++t) CHECK(lifted.assign[table.family(t)[0]] == c.assign[t]);

  // A non-universal K and a small palette are rejected.
  const auto bad = Extension::simplicial(p3, bit(0));
  const auto bad_big = build_rotation_graph(bad.big());
  CHECK_THROWS_AS(lift_coloring_simplicial(FamilyTable(bad, small, bad_big), c), std::invalid_argument);
  CHECK_THROWS_AS(lift_coloring_simplicial(table, Coloring{2, c.assign}), std::invalid_argument);
  CHECK_THROWS_AS(lift_coloring_true_twin(table, c), std::invalid_argument);
  Coloring clash = c;
  clash.assign.assign(clash.assign.size(), 0);
  CHECK_THROWS_AS(lift_coloring_simplicial(table, clash), std::invalid_argument);
}

TEST_CASE("true-twin lift on P_3 with v the centre") {
  const Graph p3 = path_graph(3);
  const auto small = build_rotation_graph(p3);
  const auto chi = chromatic_number_exact(small);
  const Coloring c{chi.upper, chi.certificate};
  const auto ext = Extension::true_twin(p3, 1);
  const auto big = build_rotation_graph(ext.big());
  const FamilyTable table(ext, small, big);
  const Coloring lifted = lift_coloring_true_twin(table, c);
  CHECK(check_proper(big, lifted).passed);
  for (Ordinal t = 0; t < small.size(); ++t) {
    const auto fam = table.family(t);
    CHECK(lifted.assign[fam.front()] == c.assign[t]);
    // T(0,2) is shifted by one.
    CHECK(lifted.assign[fam.back()] == (c.assign[t] + 1) % 3);
  }
  const auto leaf = Extension::true_twin(p3, 0);
  const auto leaf_big = build_rotation_graph(leaf.big());
  CHECK_THROWS_AS(lift_coloring_true_twin(FamilyTable(leaf, small, leaf_big), c), std::invalid_argument);
}

TEST_CASE("false-twin lift on P_3 gives R(C_4)") {
  const Graph p3 = path_graph(3);
  const auto small = build_rotation_graph(p3);
  const auto chi = chromatic_number_exact(small);
  const Coloring c{chi.upper, chi.certificate};
  const auto ext = Extension::false_twin(p3, 1);
  const auto big = build_rotation_graph(ext.big());
  CHECK(big.graph().edge_count() == 4);
  const FamilyTable table(ext, small, big);
  const Coloring lifted = lift_coloring_false_twin(table, c);
  CHECK(check_proper(big, lifted).passed);
  for (Ordinal t = 0; t < small.size(); ++t) CHECK(lifted.assign[table.family(t)[0]] == c.assign[t]);

  CHECK(false_twin_lift_applies(p3, 1));
  CHECK(false_twin_lift_applies(complete_bipartite(2, 3), 0));
  // Leaves of P_3 qualify too: V_1 = {0, 2}, V_2 = {1}.
  CHECK(false_twin_lift_applies(p3, 0));
  CHECK_FALSE(false_twin_lift_applies(path_graph(4), 0));
  CHECK_FALSE(false_twin_lift_applies(path_graph(4), 1));
  const Graph p4 = path_graph(4);
  const auto p4_small = build_rotation_graph(p4);
  const auto p4_chi = chromatic_number_exact(p4_small);
  const auto end = Extension::false_twin(p4, 0);
  const auto end_big = build_rotation_graph(end.big());
  CHECK_THROWS_AS(lift_coloring_false_twin(FamilyTable(end, p4_small, end_big), Coloring{3, p4_chi.certificate}),
                  std::invalid_argument);
}

TEST_CASE("lifts stay proper under any permutation of the base colours") {
  const Graph g = complete_split(1, 3);
  const auto small = build_rotation_graph(g);
  const auto chi = chromatic_number_exact(small);
  std::vector<int> perm(3);
  std::iota(perm.begin(), perm.end(), 0);
  const std::vector<Extension> exts = {Extension::simplicial(g, bit(0)), Extension::true_twin(g, 0),
                                       Extension::false_twin(g, 0)};
  do {
    Coloring c{3, chi.certificate};
    for (auto& a : c.assign) a = static_cast<std::uint8_t>(perm[a]);
    for (const auto& ext : exts) {
      const auto big = build_rotation_graph(ext.big());
      const Coloring lifted = lift_coloring(FamilyTable(ext, small, big), c);
      CHECK(check_proper(big, lifted).passed);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("threshold colorings") {
  const auto p3 = threshold_coloring("iu");
  CHECK(p3.rotation.size() == 5);
  CHECK(is_proper(p3.rotation, p3.coloring));

  int checked = 0;
  for (const auto& word : threshold_words(5)) {
    const Graph target = threshold_graph(word);
    if (is_complete(target)) {
      CHECK_THROWS_AS(threshold_coloring(word), std::invalid_argument);
      continue;
    }
    const auto lifted = threshold_coloring(word);
    // The construction relabels vertices; original_ids maps back.
    REQUIRE(lifted.original_ids.size() == static_cast<std::size_t>(target.order()));
    for (Vertex a = 0; a < target.order(); ++a)
      for (Vertex b = 0; b < target.order(); ++b)
        if (a != b) CHECK(lifted.graph.adjacent(a, b) == target.adjacent(lifted.original_ids[a], lifted.original_ids[b]));
    CHECK(check_proper(lifted.rotation, lifted.coloring).passed);
    CHECK(lifted.coloring.max_color() == 2);
    const auto chi = chromatic_number_exact(lifted.rotation);
    CHECK(chi.exact);
    CHECK(chi.upper == 3);
    ++checked;
  }
  CHECK(checked == 26);
  CHECK(threshold_coloring("iuu").rotation.size() == 22);
  CHECK(threshold_coloring("iiiu").graph.edge_count() == 4);
  CHECK_THROWS_AS(threshold_coloring("ui"), std::invalid_argument);
}

TEST_CASE("complete bipartite colorings") {
  for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {2, 2}, {2, 3}, {3, 2}, {1, 4}, {3, 3}}) {
    const auto lifted = bipartite_coloring(p, q);
    const Graph target = complete_bipartite(p, q);
    REQUIRE(lifted.graph.order() == p + q);
    for (Vertex a = 0; a < p + q; ++a)
      for (Vertex b = 0; b < p + q; ++b)
        if (a != b) CHECK(lifted.graph.adjacent(a, b) == target.adjacent(lifted.original_ids[a], lifted.original_ids[b]));
    CHECK(check_proper(lifted.rotation, lifted.coloring).passed);
    CHECK(lifted.coloring.max_color() == 2);
    const auto chi = chromatic_number_exact(lifted.rotation);
    CHECK(chi.exact);
    CHECK(chi.upper == 3);
  }
  CHECK_THROWS_AS(bipartite_coloring(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(bipartite_coloring(0, 3), std::invalid_argument);
}

TEST_CASE("coloring json") { CHECK(coloring_to_json(Coloring{3, {0, 2, 1}}) == "{\"k\":3,\"colors\":[0,2,1]}"); }
