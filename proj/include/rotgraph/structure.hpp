#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rotgraph/elim_tree.hpp"
#include "rotgraph/graph.hpp"
#include "rotgraph/report.hpp"
#include "rotgraph/rotation.hpp"

namespace rotgraph {

// --- families of insertions ----------------------------------------------------
// The new vertex always gets id g.order().

// T(0), ..., T(lambda+1): x inserted on the root path of the deepest K-vertex.
std::vector<ElimTree> family_Px(const Graph& g, VertexMask clique, const ElimTree& t);
// T(0,1), ..., T(d,1), T(d,2), ..., T(0,2) with T(i,1) = T(i, v', v) and
// T(i,2) the image of T(i,1) under the swap of v and v'.
std::vector<ElimTree> family_P(const Graph& g, Vertex v, const ElimTree& t);
// family_P with T(d,1), T(d,2) merged into T_wedge when v is a leaf of t.
std::vector<ElimTree> family_Ptilde(const Graph& g, Vertex v, const ElimTree& t);

enum class Mode { simplicial, true_twin, false_twin };

std::string to_string(Mode mode);

// Position of a tree inside its family: level i, side j (0 for the simplicial
// mode, 1 or 2 for the twin modes), or the merged tree T_wedge.
struct Slot {
  int i = 0;
  int j = 0;
  bool wedge = false;
};

// One of the three vertex-adding operations, with both graphs.
class Extension {
 public:
  static Extension simplicial(const Graph& g, VertexMask clique);
  static Extension true_twin(const Graph& g, Vertex v);
  static Extension false_twin(const Graph& g, Vertex v);

  Mode mode() const { return mode_; }
  const Graph& small() const { return small_; }
  const Graph& big() const { return big_; }
  VertexMask clique() const { return clique_; }
  Vertex twin() const { return v_; }
  Vertex added() const { return small_.order(); }
  // Family of t in path order; every member is checked to be a search tree
  // on big() (std::logic_error otherwise).
  std::vector<ElimTree> family(const ElimTree& t) const;
  // Vertex whose root path carries the insertion: v_lambda or v.
  Vertex anchor(const ElimTree& t) const;
  Slot slot(int position, int family_size) const;
  std::string describe() const;

 private:
  Extension(Mode mode, Graph small, Graph big) : mode_(mode), small_(std::move(small)), big_(std::move(big)) {}

  Mode mode_;
  Graph small_;
  Graph big_;
  VertexMask clique_ = 0;
  Vertex v_ = 0;
};

// Families of every tree of R(G) located inside R(big).
class FamilyTable {
 public:
  static constexpr Ordinal kNone = ~Ordinal{0};

  FamilyTable(const Extension& ext, const RotationGraph& small, const RotationGraph& big);

  const Extension& extension() const { return ext_; }
  const RotationGraph& small() const { return *small_; }
  const RotationGraph& big() const { return *big_; }
  // Big ordinals of the family of a small tree; kNone where a member is not a
  // vertex of R(big).
  std::span<const Ordinal> family(Ordinal t) const { return families_[t]; }
  // Small tree owning a big tree, or kNone if uncovered.
  Ordinal owner(Ordinal big) const { return owner_[big]; }
  int position(Ordinal big) const { return position_[big]; }
  Slot slot(Ordinal big) const;
  // Big trees claimed by two families (as "big:first-owner:second-owner").
  const std::vector<std::string>& overlaps() const { return overlaps_; }

 private:
  Extension ext_;
  const RotationGraph* small_;
  const RotationGraph* big_;
  std::vector<std::vector<Ordinal>> families_;
  std::vector<Ordinal> owner_;
  std::vector<int> position_;
  std::vector<std::string> overlaps_;
};

// Disjointness, exact cover, and that every family induces a path.
Report verify_partition(const FamilyTable& table);

// Classifies every edge of R(big) as a family path edge or an inter-family
// edge, and compares the inter-family edges of each edge e of R(G) with the
// edge set predicted by the case analysis (level offsets, 5-cycle pattern).
// Stats count edges per case and record multiplicities.
Report verify_edge_decomposition(const FamilyTable& table);

// first: T(0) or T(0,1); last: T(lambda+1) or T(0,2).
enum class Anchor { first, last };

struct EmbeddedCopy {
  // image[t] = big ordinal of the chosen member of the family of t.
  std::vector<Ordinal> image;
  Report report;
};

// Checks that t -> image[t] is an isomorphism from R(G) onto the induced
// subgraph of R(big) on the image.
EmbeddedCopy embedded_copy(const FamilyTable& table, Anchor anchor);

// --- W-special trees and the quotient map ------------------------------------------

struct Special {
  bool special = false;
  VertexMask chain = 0;  // L_T
  Vertex hinge = ElimTree::kNone;  // q_T
};

// Throws std::invalid_argument if `twins` is not a true-twin set of g with at
// least two vertices.
Special is_W_special(const Graph& g, VertexMask twins, const ElimTree& t);
// T_wedge: the chain L_T flattened into leaves under q_T.
ElimTree wedge(const ElimTree& t, const Special& s);
// pi(T); the result is checked to be a search tree on G - S.
ElimTree project(const Graph& g, VertexMask twins, const ElimTree& t);

struct QuotientMap {
  const RotationGraph* source = nullptr;
  const RotationGraph* target = nullptr;
  VertexMask twins = 0;
  std::vector<Ordinal> map;
  Report report;
};

// Builds pi : V(R(G)) -> V(R(G-S)) and checks surjectivity, the quotient law,
// that W-special edges are exactly the collapsed edges, the fiber structure,
// and that contracting all W-special edges reproduces R(G-S).
QuotientMap build_quotient(const RotationGraph& source, VertexMask twins, const RotationGraph& target);

}  // namespace rotgraph
