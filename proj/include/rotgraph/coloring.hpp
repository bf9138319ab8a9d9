#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotgraph/report.hpp"
#include "rotgraph/rotation.hpp"
#include "rotgraph/structure.hpp"

namespace rotgraph {

// assign[o] in 0..k-1 for every ordinal o of a rotation graph.
struct Coloring {
  int k = 0;
  std::vector<std::uint8_t> assign;

  int max_color() const;
};

// One edge scan; witnesses name monochromatic edges.
Report check_proper(const RotationGraph& rg, const Coloring& c);
bool is_proper(const RotationGraph& rg, const Coloring& c);

// Parity of the permutation read off each path; R(K_n) only.
Coloring sign_coloring(const RotationGraph& rg);

// Five trees forming a cycle, built from the six orders over a path a-b-c
// with ac not an edge. Empty when the graph is complete.
std::optional<std::array<Ordinal, 5>> five_cycle_witness(const RotationGraph& rg);
// Exhaustive search for any 5-cycle.
std::optional<std::array<Ordinal, 5>> find_five_cycle(const RotationGraph& rg);

// The lifts take the family table of the matching extension and the palette
// of `c` (c.k >= 3). Each checks its hypothesis and that `c` is proper, and
// throws std::invalid_argument otherwise.
//
// K universal: T(i) gets c, c+1 by parity of i; the tip T(lambda+1) gets c+2.
Coloring lift_coloring_simplicial(const FamilyTable& table, const Coloring& c);
// v universal: T(i,1) gets c, c+1 by parity of i; T(i,2) the opposite parity.
Coloring lift_coloring_true_twin(const FamilyTable& table, const Coloring& c);
// N(u) = N(v) for every u outside N(v): as the true twin, with T_wedge at c+2.
Coloring lift_coloring_false_twin(const FamilyTable& table, const Coloring& c);
// Dispatches on the mode of the table.
Coloring lift_coloring(const FamilyTable& table, const Coloring& c);

// True iff v satisfies the false-twin lift hypothesis: every vertex outside
// N(v) has neighbourhood exactly N(v).
bool false_twin_lift_applies(const Graph& g, Vertex v);

struct ChromaticOptions {
  // Colour assignments tried per k before giving up.
  std::uint64_t budget = 50'000'000;
  // Tabu-search moves tried per k before the exhaustive search, plus 100
  // per vertex.
  std::uint64_t local_iterations = 200'000;
  std::uint64_t seed = 1;
};

struct ChromaticResult {
  int lower = 0;
  int upper = 0;
  bool exact = false;
  // Proper colouring with `upper` colours.
  std::vector<std::uint8_t> certificate;
  std::uint64_t nodes = 0;
};

// Bipartite test, then a DSATUR upper bound; each k from the clique/odd-cycle
// lower bound upwards gets a tabu search and then DSATUR backtracking.
ChromaticResult chromatic_number_exact(const std::vector<std::vector<Ordinal>>& adj, ChromaticOptions options = {});
ChromaticResult chromatic_number_exact(const RotationGraph& rg, ChromaticOptions options = {});

struct LiftedColoring {
  Graph graph;
  RotationGraph rotation;
  Coloring coloring;
  // graph vertex -> vertex id of the same graph built by threshold_graph(word)
  // or complete_bipartite(p, q).
  std::vector<Vertex> original_ids;
};

// 3-colouring of R(G) for the connected threshold graph of `word`, composed of
// true-twin and pendant lifts from K_1 with a palette of three colours.
LiftedColoring threshold_coloring(std::string_view word);
// 3-colouring of R(K_{p,q}) by false-twin lifts from K_{1,2}.
LiftedColoring bipartite_coloring(int p, int q);

std::string coloring_to_json(const Coloring& c);

}  // namespace rotgraph
