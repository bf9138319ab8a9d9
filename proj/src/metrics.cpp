#include "rotgraph/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace rotgraph {

namespace {

constexpr std::size_t kMaxFarthest = 8;

// BFS into caller-owned buffers; returns the eccentricity of `source`.
int bfs_into(const RotationGraph& rg, Ordinal source, std::vector<std::uint8_t>& dist, std::vector<Ordinal>& queue) {
  dist.assign(rg.size(), kUnreached);
  queue.resize(rg.size());
  std::size_t head = 0;
  std::size_t tail = 0;
  dist[source] = 0;
  queue[tail++] = source;
  int ecc = 0;
  while (head < tail) {
    const Ordinal x = queue[head++];
    const int d = dist[x] + 1;
    for (Ordinal y : rg.neighbors(x)) {
      if (dist[y] != kUnreached) continue;
      if (d >= kUnreached) throw std::overflow_error("distance exceeds the 8-bit range");
      dist[y] = static_cast<std::uint8_t>(d);
      ecc = d;
      queue[tail++] = y;
    }
  }
  return ecc;
}

}  // namespace

DistanceProfile bfs_from(const RotationGraph& rg, Ordinal source) {
  if (source >= rg.size()) throw std::out_of_range("source ordinal out of range");
  DistanceProfile p;
  p.source = source;
  std::vector<Ordinal> queue;
  p.eccentricity = bfs_into(rg, source, p.dist, queue);
  for (Ordinal o = 0; o < rg.size(); ++o) {
    if (p.dist[o] != p.eccentricity) continue;
    ++p.farthest_count;
    if (p.farthest.size() < kMaxFarthest) p.farthest.push_back(o);
  }
  return p;
}

int distance(const RotationGraph& rg, Ordinal a, Ordinal b) {
  const auto p = bfs_from(rg, a);
  return p.dist.at(b) == kUnreached ? -1 : p.dist[b];
}

Report check_profile(const RotationGraph& rg, const DistanceProfile& p) {
  Report r("distance_profile", "source " + std::to_string(p.source));
  r.expect(p.dist[p.source] == 0, [] { return std::string("source is not at distance 0"); });
  for (Ordinal a = 0; a < rg.size(); ++a) {
    for (Ordinal b : rg.neighbors(a)) {
      r.expect(std::abs(int{p.dist[a]} - int{p.dist[b]}) <= 1, [&] {
        return "edge " + std::to_string(a) + "-" + std::to_string(b) + " changes distance by more than one";
      });
    }
  }
  return r;
}

// --- orbits --------------------------------------------------------------------------

bool is_automorphism(const Graph& g, const Permutation& f) {
  const int n = g.order();
  if (static_cast<int>(f.size()) != n) return false;
  VertexMask seen = 0;
  for (Vertex v : f) {
    if (v < 0 || v >= n || (seen & bit(v))) return false;
    seen |= bit(v);
  }
  for (auto [u, v] : g.edges()) {
    if (!g.adjacent(f[u], f[v])) return false;
  }
  return true;
}

std::vector<Permutation> twin_class_generators(const Graph& g) {
  const int n = g.order();
  std::vector<Permutation> out;
  VertexMask placed = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (placed & bit(v)) continue;
    std::vector<Vertex> cls{v};
    for (Vertex u = v + 1; u < n; ++u) {
      if (placed & bit(u)) continue;
      const bool open = g.neighbors(u) == g.neighbors(v);
      const bool closed = g.closed_neighbors(u) == g.closed_neighbors(v);
      if (open || closed) cls.push_back(u);
    }
    for (Vertex u : cls) placed |= bit(u);
    if (cls.size() < 2) continue;
    Permutation swap(static_cast<std::size_t>(n));
    std::iota(swap.begin(), swap.end(), 0);
    std::swap(swap[cls[0]], swap[cls[1]]);
    out.push_back(swap);
    if (cls.size() > 2) {
      Permutation cycle(static_cast<std::size_t>(n));
      std::iota(cycle.begin(), cycle.end(), 0);
      for (std::size_t k = 0; k < cls.size(); ++k) cycle[cls[k]] = cls[(k + 1) % cls.size()];
      out.push_back(cycle);
    }
  }
  return out;
}

OrbitSet orbit_reduce(const RotationGraph& rg, std::vector<Permutation> generators) {
  for (const auto& f : generators) {
    if (!is_automorphism(rg.graph(), f)) throw std::invalid_argument("generator is not an automorphism of G");
  }
  std::vector<Ordinal> parent(rg.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Ordinal x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Ordinal o = 0; o < rg.size(); ++o) {
    for (const auto& f : generators) {
      const auto image = rg.find(relabel(rg.tree(o), f));
      if (!image) throw std::logic_error("f* of a search tree is not in the rotation graph");
      const Ordinal a = find(o);
      const Ordinal b = find(*image);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  OrbitSet s;
  s.generators = std::move(generators);
  s.orbit.resize(rg.size());
  std::vector<std::uint32_t> index(rg.size(), ~std::uint32_t{0});
  for (Ordinal o = 0; o < rg.size(); ++o) {
    const Ordinal root = find(o);
    if (index[root] == ~std::uint32_t{0}) {
      index[root] = static_cast<std::uint32_t>(s.representatives.size());
      s.representatives.push_back(o);
      s.sizes.push_back(0);
    }
    s.orbit[o] = index[root];
    ++s.sizes[index[root]];
  }
  return s;
}

// --- diameter --------------------------------------------------------------------------

namespace {

struct SourceResult {
  int ecc = 0;
  Ordinal far = 0;
};

std::string checkpoint_header(const RotationGraph& rg) {
  return "# rotgraph diameter checkpoint n " + std::to_string(rg.size()) + " edges " +
         std::to_string(rg.edge_count());
}

std::map<Ordinal, SourceResult> load_checkpoint(const std::string& path, const RotationGraph& rg) {
  std::map<Ordinal, SourceResult> done;
  std::ifstream in(path);
  if (!in) return done;
  std::string line;
  if (!std::getline(in, line)) return done;
  if (line != checkpoint_header(rg)) throw std::invalid_argument("checkpoint '" + path + "' belongs to another graph");
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    Ordinal s = 0;
    SourceResult r;
    if (fields >> s >> r.ecc >> r.far) done[s] = r;
  }
  return done;
}

}  // namespace

DiameterResult diameter(const RotationGraph& rg, const OrbitSet* orbits, DiameterOptions options) {
  const auto start = std::chrono::steady_clock::now();
  DiameterResult result;
  result.report = Report("orbit_eccentricity", std::to_string(rg.size()) + " trees");
  std::vector<Ordinal> sources;
  if (orbits) {
    if (orbits->orbit.size() != rg.size()) throw std::invalid_argument("orbit set does not match the rotation graph");
    sources = orbits->representatives;
  } else {
    sources.resize(rg.size());
    std::iota(sources.begin(), sources.end(), 0);
  }
  result.sources_total = sources.size();

  std::map<Ordinal, SourceResult> done;
  if (!options.checkpoint.empty()) done = load_checkpoint(options.checkpoint, rg);
  std::ofstream checkpoint;
  if (!options.checkpoint.empty()) {
    const bool fresh = done.empty();
    checkpoint.open(options.checkpoint, fresh ? std::ios::trunc : std::ios::app);
    if (!checkpoint) throw std::runtime_error("cannot write checkpoint '" + options.checkpoint + "'");
    if (fresh) checkpoint << checkpoint_header(rg) << '\n' << std::flush;
  }

  std::vector<Ordinal> todo;
  for (Ordinal s : sources) {
    if (!done.count(s)) todo.push_back(s);
  }
  if (options.max_sources > 0) {
    const std::size_t allowed = options.max_sources > done.size() ? options.max_sources - done.size() : 0;
    if (todo.size() > allowed) {
      todo.resize(allowed);
      result.exact = false;
    }
  }

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(todo.size(), 1)));
  std::atomic<std::size_t> next{0};
  std::mutex lock;
  std::exception_ptr failure;
  auto worker = [&] {
    std::vector<std::uint8_t> dist;
    std::vector<Ordinal> queue;
    try {
      for (std::size_t k = next++; k < todo.size(); k = next++) {
        const Ordinal s = todo[k];
        SourceResult r;
        r.ecc = bfs_into(rg, s, dist, queue);
        r.far = queue[rg.size() - 1];
        for (Ordinal o = 0; o < rg.size(); ++o) {
          if (dist[o] == kUnreached) throw std::invalid_argument("rotation graph is disconnected");
        }
        std::lock_guard guard(lock);
        done[s] = r;
        if (checkpoint.is_open()) checkpoint << s << ' ' << r.ecc << ' ' << r.far << '\n' << std::flush;
      }
    } catch (...) {
      std::lock_guard guard(lock);
      failure = std::current_exception();
      next = todo.size();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (Ordinal s : sources) {
    const auto it = done.find(s);
    if (it == done.end()) continue;
    ++result.sources_run;
    if (it->second.ecc > result.value || result.sources_run == 1) {
      result.value = it->second.ecc;
      result.witness = {s, it->second.far};
    }
  }

  if (orbits && options.spot_checks > 0) {
    std::vector<std::uint32_t> nontrivial;
    for (std::uint32_t k = 0; k < orbits->sizes.size(); ++k) {
      if (orbits->sizes[k] > 1 && done.count(orbits->representatives[k])) nontrivial.push_back(k);
    }
    std::mt19937_64 rng(options.seed);
    std::vector<std::uint8_t> dist;
    std::vector<Ordinal> queue;
    for (int c = 0; c < options.spot_checks && !nontrivial.empty(); ++c) {
      const std::uint32_t k = nontrivial[rng() % nontrivial.size()];
      std::vector<Ordinal> members;
      for (Ordinal o = 0; o < rg.size(); ++o) {
        if (orbits->orbit[o] == k && o != orbits->representatives[k]) members.push_back(o);
      }
      const Ordinal other = members[rng() % members.size()];
      const int ecc = bfs_into(rg, other, dist, queue);
      const int rep = done[orbits->representatives[k]].ecc;
      result.report.expect(ecc == rep, [&] {
        return "tree " + std::to_string(other) + " has eccentricity " + std::to_string(ecc) + ", its representative " +
               std::to_string(rep);
      });
      result.report.count("spot_checks");
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// --- laws of rotations --------------------------------------------------------------------

bool order_differs(const ElimTree& a, const ElimTree& b, Vertex u, Vertex v) {
  return a.is_ancestor(u, v) != b.is_ancestor(u, v);
}

namespace {

bool is_pair_label(const RotatedPair& p, Vertex u, Vertex v) { return p.involves(u, v); }

std::size_t label_index(const RotationGraph& rg, Ordinal a, Ordinal b) {
  const auto row = rg.neighbors(a);
  const auto it = std::lower_bound(row.begin(), row.end(), b);
  if (it == row.end() || *it != b) throw std::invalid_argument("walk steps between non-adjacent trees");
  return static_cast<std::size_t>(it - row.begin());
}

}  // namespace

bool rotation_parity_check(const RotationGraph& rg, std::span<const Ordinal> walk, Vertex u, Vertex v) {
  if (!rg.has_labels()) throw std::invalid_argument("parity check needs edge labels");
  if (!rg.graph().adjacent(u, v)) throw std::invalid_argument("u and v must be adjacent");
  if (walk.empty()) throw std::invalid_argument("empty walk");
  int count = 0;
  for (std::size_t k = 0; k + 1 < walk.size(); ++k) {
    const auto idx = label_index(rg, walk[k], walk[k + 1]);
    count += is_pair_label(rg.labels(walk[k])[idx], u, v);
  }
  return (count % 2 == 1) == order_differs(rg.tree(walk.front()), rg.tree(walk.back()), u, v);
}

Report rotation_parity_walks(const RotationGraph& rg, int walks, int max_length, std::mt19937_64& rng) {
  Report r("rotation_parity", std::to_string(walks) + " walks");
  const auto edges = rg.graph().edges();
  std::vector<Ordinal> walk;
  for (int w = 0; w < walks; ++w) {
    walk.assign(1, static_cast<Ordinal>(rng() % rg.size()));
    const int length = static_cast<int>(rng() % static_cast<std::uint64_t>(max_length + 1));
    for (int s = 0; s < length; ++s) {
      const auto row = rg.neighbors(walk.back());
      if (row.empty()) break;
      walk.push_back(row[rng() % row.size()]);
    }
    for (auto [u, v] : edges) {
      r.count("checks");
      r.expect(rotation_parity_check(rg, walk, u, v), [&] {
        return "walk from " + rg.tree(walk.front()).to_string() + " of length " + std::to_string(walk.size() - 1) +
               " breaks parity for " + pair_label(rg.graph(), RotatedPair{static_cast<std::uint8_t>(u),
                                                                          static_cast<std::uint8_t>(v)});
      });
    }
  }
  r.stats["walks"] = walks;
  return r;
}

Report twin_rotation_count_check(const RotationGraph& rg, Vertex u, Vertex v,
                                 std::span<const std::pair<Ordinal, Ordinal>> pairs) {
  if (!rg.has_labels()) throw std::invalid_argument("twin rotation check needs edge labels");
  if (u == v || !is_true_twin_set(rg.graph(), bit(u) | bit(v))) throw std::invalid_argument("u, v must be true twins");
  Report r("twin_rotation_count", pair_label(rg.graph(), {static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v)}));
  std::vector<std::uint8_t> from;
  std::vector<std::uint8_t> to;
  std::vector<Ordinal> queue;
  std::vector<Ordinal> order;
  std::vector<int> lo(rg.size());
  std::vector<int> hi(rg.size());
  for (auto [a, b] : pairs) {
    bfs_into(rg, a, from, queue);
    bfs_into(rg, b, to, queue);
    const int d = from[b];
    // Geodesic DAG in BFS order from a; min and max uv-rotations per node.
    order.clear();
    for (Ordinal o = 0; o < rg.size(); ++o) {
      if (from[o] + to[o] == d) order.push_back(o);
    }
    std::sort(order.begin(), order.end(), [&](Ordinal x, Ordinal y) { return from[x] < from[y]; });
    for (Ordinal o : order) {
      lo[o] = 1 << 20;
      hi[o] = -1;
    }
    lo[a] = hi[a] = 0;
    for (Ordinal x : order) {
      const auto row = rg.neighbors(x);
      const auto labels = rg.labels(x);
      for (std::size_t n = 0; n < row.size(); ++n) {
        const Ordinal y = row[n];
        if (from[y] != from[x] + 1 || from[y] + to[y] != d) continue;
        const int w = is_pair_label(labels[n], u, v);
        lo[y] = std::min(lo[y], lo[x] + w);
        hi[y] = std::max(hi[y], hi[x] + w);
      }
    }
    const int expected = order_differs(rg.tree(a), rg.tree(b), u, v) ? 1 : 0;
    r.count(expected ? "pairs_order_differs" : "pairs_order_same");
    r.expect(lo[b] == expected && hi[b] == expected, [&] {
      return "geodesics " + rg.tree(a).to_string() + " -> " + rg.tree(b).to_string() + " use " + std::to_string(lo[b]) +
             ".." + std::to_string(hi[b]) + " uv-rotations, expected " + std::to_string(expected);
    });
  }
  return r;
}

Report quotient_distance_check(const QuotientMap& q, std::span<const std::pair<Ordinal, Ordinal>> pairs) {
  if (std::popcount(q.twins) != 2) throw std::invalid_argument("the distance dichotomy needs |W| = 2");
  const RotationGraph& src = *q.source;
  const RotationGraph& dst = *q.target;
  Report r("quotient_distance", "W=" + mask_to_string(src.graph(), q.twins));
  // BFS results are reused across pairs sharing an endpoint.
  std::unordered_map<Ordinal, std::vector<std::uint8_t>> src_cache;
  std::unordered_map<Ordinal, std::vector<std::uint8_t>> dst_cache;
  std::vector<Ordinal> queue;
  auto cached = [&](std::unordered_map<Ordinal, std::vector<std::uint8_t>>& cache, const RotationGraph& rg,
                    Ordinal s) -> const std::vector<std::uint8_t>& {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    if (cache.size() > 64) cache.clear();
    auto& slot = cache[s];
    bfs_into(rg, s, slot, queue);
    return slot;
  };
  for (auto [a, b] : pairs) {
    const auto da = cached(src_cache, src, a);
    const auto& db = cached(src_cache, src, b);
    const int d = da[b];
    // An edge is W-special iff it is collapsed by pi (checked by build_quotient).
    bool special_on_geodesic = false;
    for (Ordinal x = 0; x < src.size() && !special_on_geodesic; ++x) {
      if (da[x] + db[x] != d) continue;
      for (Ordinal y : src.neighbors(x)) {
        if (q.map[x] == q.map[y] && da[x] + 1 + db[y] == d) {
          special_on_geodesic = true;
          break;
        }
      }
    }
    const int target = cached(dst_cache, dst, q.map[a])[q.map[b]];
    const int expected = special_on_geodesic ? d - 1 : d;
    r.count(special_on_geodesic ? "pairs_with_special_geodesic" : "pairs_without_special_geodesic");
    r.expect(target == expected, [&] {
      return src.tree(a).to_string() + " -> " + src.tree(b).to_string() + ": source distance " + std::to_string(d) +
             ", target " + std::to_string(target) + ", expected " + std::to_string(expected);
    });
  }
  return r;
}

std::vector<std::pair<Ordinal, Ordinal>> all_pairs(std::size_t n) {
  std::vector<std::pair<Ordinal, Ordinal>> out;
  out.reserve(n * n);
  for (Ordinal a = 0; a < n; ++a)
    for (Ordinal b = 0; b < n; ++b) out.emplace_back(a, b);
  return out;
}

std::vector<std::pair<Ordinal, Ordinal>> sample_pairs(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::pair<Ordinal, Ordinal>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    out.emplace_back(static_cast<Ordinal>(rng() % n), static_cast<Ordinal>(rng() % n));
  }
  return out;
}

// --- diameter bounds ------------------------------------------------------------------------

std::int64_t binomial2(std::int64_t n) { return n * (n - 1) / 2; }

int spk_diameter_formula(int p, int q) {
  if (q >= 4 * p + 1) return static_cast<int>(2 * p * q + binomial2(p));
  return static_cast<int>(p * q + binomial2(q) / 2 + binomial2(p));
}

int kpq_diameter_lower_bound(int p, int q) { return static_cast<int>(p * q + binomial2(q) / 2); }

double k2q_distance_upper_bound(int q) { return 2.0 * q + (static_cast<double>(binomial2(q)) + 1.0) / 2.0; }

LowerBound lower_bound_check(const Graph& g, VertexMask twins, DiameterOptions options) {
  if (std::popcount(twins) < 2 || !is_true_twin_set(g, twins)) {
    throw std::invalid_argument("W must be a set of at least two true twins");
  }
  const Graph reduced = delete_twin_edges(g, twins);
  if (!is_connected(reduced)) throw std::invalid_argument("G - S is disconnected");
  BuildOptions build;
  build.edge_labels = false;
  LowerBound out;
  {
    const auto rg = build_rotation_graph(g, build);
    const auto orbits = orbit_reduce(rg, twin_class_generators(g));
    out.source = diameter(rg, &orbits, options);
  }
  {
    const auto rg = build_rotation_graph(reduced, build);
    const auto orbits = orbit_reduce(rg, twin_class_generators(reduced));
    out.target = diameter(rg, &orbits, options);
  }
  const auto w = binomial2(std::popcount(twins));
  out.report = Report("lower_bound", "W=" + mask_to_string(g, twins));
  out.report.absorb(out.source.report);
  out.report.absorb(out.target.report);
  out.report.expect(out.source.exact && out.target.exact, [] { return std::string("a diameter run was cut short"); });
  out.report.expect(out.source.value - w <= out.target.value, [&] {
    return "diam(R(G)) - C(|W|,2) = " + std::to_string(out.source.value - w) + " exceeds diam(R(G-S)) = " +
           std::to_string(out.target.value);
  });
  out.report.stats["source_diameter"] = out.source.value;
  out.report.stats["target_diameter"] = out.target.value;
  out.report.stats["slack"] = out.target.value - (out.source.value - w);
  return out;
}

Report split_bipartite_check(int p, int q, int spk_diameter, int kpq_diameter) {
  Report r("split_bipartite_bounds", "p=" + std::to_string(p) + " q=" + std::to_string(q));
  const int formula = spk_diameter_formula(p, q);
  r.expect(spk_diameter == formula, [&] {
    return "diam(R(SPK)) = " + std::to_string(spk_diameter) + ", closed form " + std::to_string(formula);
  });
  r.expect(spk_diameter - binomial2(p) <= kpq_diameter, [&] {
    return "diam(R(SPK)) - C(p,2) = " + std::to_string(spk_diameter - binomial2(p)) + " exceeds diam(R(K_pq)) = " +
           std::to_string(kpq_diameter);
  });
  if (std::min(2.0, p / 4.0) <= q && q <= 4 * p) {
    const int bound = kpq_diameter_lower_bound(p, q);
    r.expect(bound <= kpq_diameter, [&] {
      return "pq + floor(C(q,2)/2) = " + std::to_string(bound) + " exceeds " + std::to_string(kpq_diameter);
    });
    r.expect(binomial2(q) <= kpq_diameter && kpq_diameter <= 2 * p * q,
             [&] { return "balanced bounds C(q,2) <= diam <= 2pq fail"; });
  }
  if (q >= 4 * p + 1) {
    r.expect(kpq_diameter == 2 * p * q, [&] { return "unbalanced diam(R(K_pq)) differs from 2pq"; });
  }
  r.stats["spk_diameter"] = spk_diameter;
  r.stats["kpq_diameter"] = kpq_diameter;
  r.stats["tight"] = spk_diameter - binomial2(p) == kpq_diameter;
  return r;
}

}  // namespace rotgraph
