#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rotgraph/elim_tree.hpp"
#include "rotgraph/graph.hpp"
#include "rotgraph/report.hpp"
#include "rotgraph/rotation.hpp"
#include "rotgraph/structure.hpp"

namespace rotgraph {

// Thrown when a run exceeds its time budget; caps on tree counts surface as
// CapExceeded from the builder.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Caps {
  std::size_t max_trees = 5'000'000;
  // 0: unlimited. Converted to a tree cap with a per-tree estimate.
  std::size_t max_memory_mb = 0;
  // Wall-clock seconds for a whole verify run; 0: unlimited.
  double time_budget = 0.0;

  // Environment overrides: ROTGRAPH_MAX_TREES, ROTGRAPH_MAX_MEMORY_MB,
  // ROTGRAPH_TIME_BUDGET. Malformed or non-positive values throw.
  void apply_environment();
  std::size_t tree_cap() const;
};

struct VerifyOptions {
  bool deep = false;
  unsigned threads = 0;
  std::uint64_t seed = 1;
  Caps caps;
  // Sampled walks per instance for the parity law.
  int walks = 500;
  // Sampled pairs per instance where the twin and quotient distance checks are not exhaustive.
  int pairs = 2000;
  // Where q = 7, 8 diameter runs keep their progress; empty: no checkpoints.
  std::string checkpoint_dir;
  std::string data_dir;  // empty: default_data_dir()
};

// ROTGRAPH_DATA_DIR if set, else the data/ directory of the source tree.
std::string default_data_dir();

// One representative per isomorphism class of connected graphs on n <= 7 vertices.
std::vector<Graph> connected_graph_classes(int n);
// Non-empty cliques of g.
std::vector<VertexMask> cliques(const Graph& g);
// Every simplicial (over each clique), true-twin and false-twin extension.
std::vector<Extension> all_extensions(const Graph& g);

// A pair of path trees in the rotation graph of a named family, listed root
// first by vertex label, with the distance between them.
struct Witness {
  std::string name;
  FamilySpec family;
  Graph graph{1};
  ElimTree from;
  ElimTree to;
  int distance = 0;
};

Witness load_witness(const std::string& path);
Report check_witness(const Witness& w, const Caps& caps);

const std::vector<std::string>& suite_names();
// Runs "partitions", "quotients", "colorings", "distances" or "all".
std::vector<Report> run_suite(std::string_view suite, const VerifyOptions& options);

}  // namespace rotgraph
