#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rotgraph/report.hpp"
#include "rotgraph/rotation.hpp"
#include "rotgraph/structure.hpp"

namespace rotgraph {

// --- distances ------------------------------------------------------------------

inline constexpr std::uint8_t kUnreached = 0xFF;

struct DistanceProfile {
  Ordinal source = 0;
  // Hop counts; kUnreached where not reached. Distances above 254 throw.
  std::vector<std::uint8_t> dist;
  int eccentricity = 0;
  // First few trees at distance `eccentricity`, and how many there are.
  std::vector<Ordinal> farthest;
  std::size_t farthest_count = 0;
};

DistanceProfile bfs_from(const RotationGraph& rg, Ordinal source);
int distance(const RotationGraph& rg, Ordinal a, Ordinal b);

// Edge-Lipschitz property and dist(source) = 0.
Report check_profile(const RotationGraph& rg, const DistanceProfile& p);

// --- orbits ------------------------------------------------------------------------

using Permutation = std::vector<Vertex>;

bool is_automorphism(const Graph& g, const Permutation& f);

// Transposition and full cycle on every class of vertices sharing an open or
// closed neighbourhood: S_p x S_q for K_{p,q} and SPK_{p,q}, S_n for K_n.
std::vector<Permutation> twin_class_generators(const Graph& g);

struct OrbitSet {
  std::vector<Permutation> generators;
  // orbit[o] = index of the orbit of ordinal o.
  std::vector<std::uint32_t> orbit;
  // Smallest ordinal of each orbit.
  std::vector<Ordinal> representatives;
  std::vector<std::size_t> sizes;
};

// Orbits of the trees under f* for the group generated by `generators`;
// throws std::invalid_argument if a generator is not an automorphism.
OrbitSet orbit_reduce(const RotationGraph& rg, std::vector<Permutation> generators);

// --- diameter ----------------------------------------------------------------------

struct DiameterOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  // Eccentricities are compared on this many random non-trivial orbits.
  int spot_checks = 2;
  // Stop after this many sources (0: no limit); the result is then a lower bound.
  std::size_t max_sources = 0;
  // One line per finished source; existing lines are reused on restart.
  std::string checkpoint;
  std::uint64_t seed = 1;
};

struct DiameterResult {
  int value = 0;
  std::pair<Ordinal, Ordinal> witness{0, 0};
  std::size_t sources_run = 0;
  std::size_t sources_total = 0;
  bool exact = true;
  double seconds = 0.0;
  Report report;  // spot checks of orbit-constant eccentricity
};

// Maximum eccentricity over all trees, or over orbit representatives.
DiameterResult diameter(const RotationGraph& rg, const OrbitSet* orbits = nullptr, DiameterOptions options = {});

// --- laws of rotations ---------------------------------------------------------------

// True iff u, v have different relative order in the two trees.
bool order_differs(const ElimTree& a, const ElimTree& b, Vertex u, Vertex v);

// For an edge uv of G and a walk (consecutive ordinals adjacent in rg): the
// number of uv-rotations along the walk is odd iff u, v have different
// relative order at its ends. Throws on an invalid walk or missing labels.
bool rotation_parity_check(const RotationGraph& rg, std::span<const Ordinal> walk, Vertex u, Vertex v);

// Random walks of up to `max_length` steps, checked for every edge of G.
Report rotation_parity_walks(const RotationGraph& rg, int walks, int max_length, std::mt19937_64& rng);

// For true twins u, v: over all geodesics between each pair, the number of
// uv-rotations is exactly 1 if the order differs and 0 otherwise.
Report twin_rotation_count_check(const RotationGraph& rg, Vertex u, Vertex v,
                                 std::span<const std::pair<Ordinal, Ordinal>> pairs);

// |W| = 2: dist(pi T, pi T') = dist(T, T') - 1 iff some geodesic of R(G)
// between T and T' uses a W-special edge, and dist(T, T') otherwise.
Report quotient_distance_check(const QuotientMap& q, std::span<const std::pair<Ordinal, Ordinal>> pairs);

std::vector<std::pair<Ordinal, Ordinal>> all_pairs(std::size_t n);
std::vector<std::pair<Ordinal, Ordinal>> sample_pairs(std::size_t n, std::size_t count, std::mt19937_64& rng);

// --- diameter bounds -----------------------------------------------------------------

std::int64_t binomial2(std::int64_t n);
// Closed form for diam(R(SPK_{p,q})).
int spk_diameter_formula(int p, int q);
// pq + floor(C(q,2)/2), valid when min(2, p/4) <= q <= 4p.
int kpq_diameter_lower_bound(int p, int q);
// 2q + (C(q,2) + 1) / 2: broom-path bound on every distance in R(K_{2,q}).
double k2q_distance_upper_bound(int q);

struct LowerBound {
  DiameterResult source;
  DiameterResult target;
  Report report;
};

// diam(R(G)) - C(|W|,2) <= diam(R(G - S)), with both diameters computed by
// orbit-reduced BFS.
LowerBound lower_bound_check(const Graph& g, VertexMask twins, DiameterOptions options = {});

// The SPK/K_{p,q} instance of the bound: diam(R(SPK_{p,q})) against its closed
// form, the bound pq + floor(C(q,2)/2) when it applies, and 2pq when q >= 4p+1.
Report split_bipartite_check(int p, int q, int spk_diameter, int kpq_diameter);

}  // namespace rotgraph
