#include "rotgraph/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "rotgraph/coloring.hpp"
#include "rotgraph/metrics.hpp"

#ifndef ROTGRAPH_DATA_DIR
#define ROTGRAPH_DATA_DIR "data"
#endif

namespace rotgraph {

namespace {

// Rough resident size of one tree of R(G): key, index entry, offsets, and
// about ten adjacency slots with labels.
constexpr std::size_t kBytesPerTree = 192;

std::size_t parse_positive(const char* name, const char* text) {
  char* end = nullptr;
  // strtoull accepts a sign and wraps negatives, so require a leading digit.
  const bool digit = text[0] >= '0' && text[0] <= '9';
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (!digit || *end != '\0' || v == 0) {
    throw std::invalid_argument(std::string(name) + " must be a positive integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

void Caps::apply_environment() {
  if (const char* s = std::getenv("ROTGRAPH_MAX_TREES")) max_trees = parse_positive("ROTGRAPH_MAX_TREES", s);
  if (const char* s = std::getenv("ROTGRAPH_MAX_MEMORY_MB")) {
    max_memory_mb = parse_positive("ROTGRAPH_MAX_MEMORY_MB", s);
  }
  if (const char* s = std::getenv("ROTGRAPH_TIME_BUDGET")) {
    time_budget = static_cast<double>(parse_positive("ROTGRAPH_TIME_BUDGET", s));
  }
}

std::size_t Caps::tree_cap() const {
  if (max_memory_mb == 0) return max_trees;
  return std::min(max_trees, max_memory_mb * 1024 * 1024 / kBytesPerTree);
}

std::string default_data_dir() {
  if (const char* s = std::getenv("ROTGRAPH_DATA_DIR")) return s;
  return ROTGRAPH_DATA_DIR;
}

// --- corpus --------------------------------------------------------------------------

std::vector<Graph> connected_graph_classes(int n) {
  if (n < 1 || n > 7) throw std::invalid_argument("graph classes are enumerated for 1 <= n <= 7");
  std::vector<std::pair<int, int>> pairs;
  int index[7][7] = {};
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      index[u][v] = index[v][u] = static_cast<int>(pairs.size());
      pairs.emplace_back(u, v);
    }
  }
  std::vector<std::vector<int>> perms;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  // Codes are visited in increasing order and every relabelling of a new
  // class is marked, so each class is met once, at its smallest code.
  std::vector<bool> seen(std::size_t{1} << pairs.size());
  std::vector<Graph> out;
  for (std::uint32_t code = 0; code < seen.size(); ++code) {
    if (seen[code]) continue;
    std::vector<Graph::Edge> edges;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (code & (std::uint32_t{1} << k)) edges.push_back(pairs[k]);
    }
    for (const auto& p : perms) {
      std::uint32_t image = 0;
      for (auto [a, b] : edges) image |= std::uint32_t{1} << index[p[a]][p[b]];
      seen[image] = true;
    }
    Graph g(n, edges);
    if (is_connected(g)) out.push_back(std::move(g));
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

std::vector<Extension> all_extensions(const Graph& g) {
  std::vector<Extension> out;
  for (VertexMask k : cliques(g)) out.push_back(Extension::simplicial(g, k));
  for (Vertex v = 0; v < g.order(); ++v) {
    out.push_back(Extension::true_twin(g, v));
    if (g.order() > 1) out.push_back(Extension::false_twin(g, v));
  }
  return out;
}

// --- witnesses -------------------------------------------------------------------------

Witness load_witness(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open witness file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("witness '" + path + "': " + e.what());
  }
  Witness w;
  w.name = std::filesystem::path(path).stem().string();
  w.family = parse_family_spec(j.at("graph").get<std::string>());
  w.graph = make_family(w.family);
  w.distance = j.at("distance").get<int>();
  auto path_of = [&](const char* key) {
    std::vector<Vertex> order;
    for (const auto& name : j.at(key)) {
      const auto& labels = w.graph.labels();
      const auto it = std::find(labels.begin(), labels.end(), name.get<std::string>());
      if (it == labels.end()) throw std::invalid_argument("witness '" + path + "': unknown vertex " + name.dump());
      order.push_back(static_cast<Vertex>(it - labels.begin()));
    }
    ElimTree t = ElimTree::path(order);
    if (!validate(w.graph, t)) throw std::invalid_argument("witness '" + path + "': '" + key + "' is not a search tree");
    return t;
  };
  w.from = path_of("from");
  w.to = path_of("to");
  return w;
}

Report check_witness(const Witness& w, const Caps& caps) {
  Report r("witness_distance", w.name + " on " + w.family.to_string());
  BuildOptions build;
  build.max_trees = caps.tree_cap();
  build.edge_labels = false;
  const auto rg = build_rotation_graph(w.graph, build);
  const int d = distance(rg, rg.at(w.from), rg.at(w.to));
  r.expect(d == w.distance, [&] {
    return "distance " + std::to_string(d) + ", fixture says " + std::to_string(w.distance);
  });
  r.stats["distance"] = d;
  r.stats["trees"] = static_cast<std::int64_t>(rg.size());
  return r;
}

// --- suites ------------------------------------------------------------------------------

namespace {

class Runner {
 public:
  explicit Runner(const VerifyOptions& options) : options_(options), start_(std::chrono::steady_clock::now()) {
    build_.max_trees = options.caps.tree_cap();
    plain_ = build_;
    plain_.edge_labels = false;
  }

  void partitions();
  void quotients();
  void colorings();
  void distances();

  std::vector<Report> take() { return std::move(reports_); }

 private:
  void tick() const {
    if (options_.caps.time_budget <= 0) return;
    const double spent = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (spent > options_.caps.time_budget) {
      throw BudgetExceeded("time budget of " + std::to_string(options_.caps.time_budget) + " s exceeded");
    }
  }

  RotationGraph build(const Graph& g, bool labels = true) const {
    tick();
    return build_rotation_graph(g, labels ? build_ : plain_);
  }

  // Copies the failures of `r` into `into` with a context prefix and sums stats.
  static void fold(Report& into, const Report& r, const std::string& context) {
    for (const auto& w : r.witnesses) into.fail(context + ": " + w);
    const std::size_t unlisted = r.violations - r.witnesses.size();
    if (unlisted) {
      into.passed = false;
      into.violations += unlisted;
    }
    for (const auto& [k, v] : r.stats) into.stats[k] += v;
  }

  DiameterResult orbit_diameter(const Graph& g, const std::string& tag) const {
    const auto rg = build(g, false);
    const auto orbits = orbit_reduce(rg, twin_class_generators(g));
    DiameterOptions d;
    d.threads = options_.threads;
    d.seed = options_.seed;
    if (!options_.checkpoint_dir.empty()) {
      std::filesystem::create_directories(options_.checkpoint_dir);
      d.checkpoint = (std::filesystem::path(options_.checkpoint_dir) / ("diameter_" + tag + ".txt")).string();
    }
    return diameter(rg, &orbits, d);
  }

  void structure_checks(Report& partition, Report& decomposition, Report* copies, const Graph& g) {
    const auto small = build(g);
    for (const auto& ext : all_extensions(g)) {
      const auto big = build(ext.big());
      const FamilyTable table(ext, small, big);
      fold(partition, verify_partition(table), ext.describe());
      partition.count("extensions");
      fold(decomposition, verify_edge_decomposition(table), ext.describe());
      if (copies) {
        for (Anchor a : {Anchor::first, Anchor::last}) fold(*copies, embedded_copy(table, a).report, ext.describe());
      }
    }
  }

  const VerifyOptions& options_;
  std::chrono::steady_clock::time_point start_;
  BuildOptions build_;
  BuildOptions plain_;
  std::vector<Report> reports_;
};

std::int64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

std::int64_t catalan(int n) {
  std::int64_t c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

void Runner::partitions() {
  Report counts("vertex_counts", "K_n, P_n, SPK_2,2");
  auto expect_count = [&](const std::string& name, const Graph& g, std::int64_t expected) {
    const auto n = static_cast<std::int64_t>(build(g, false).size());
    counts.expect(n == expected, [&] {
      return name + " has " + std::to_string(n) + " trees, expected " + std::to_string(expected);
    });
    counts.stats[name] = n;
  };
  for (int n = 3; n <= 6; ++n) expect_count("K_" + std::to_string(n), complete_graph(n), factorial(n));
  for (int n = 3; n <= 8; ++n) expect_count("P_" + std::to_string(n), path_graph(n), catalan(n));
  expect_count("SPK_2,2", complete_split(2, 2), 22);
  reports_.push_back(std::move(counts));

  Report partition("partition", "connected graphs, 1 <= n <= 5");
  Report decomposition("edge_decomposition", "connected graphs, 1 <= n <= 5");
  Report copies("embedded_copy", "connected graphs, 1 <= n <= 5");
  for (int n = 1; n <= 5; ++n) {
    for (const auto& g : connected_graph_classes(n)) {
      structure_checks(partition, decomposition, &copies, g);
      partition.count("graphs");
    }
  }
  reports_.push_back(std::move(partition));
  reports_.push_back(std::move(decomposition));
  reports_.push_back(std::move(copies));

  Report named("partition", "SPK_p,q and K_p,q, p + q <= 7");
  Report named_decomposition("edge_decomposition", "SPK_p,q and K_p,q, p + q <= 7");
  for (int p = 1; p <= 6; ++p) {
    for (int q = 1; p + q <= 7; ++q) {
      structure_checks(named, named_decomposition, nullptr, complete_split(p, q));
      if (p <= q) structure_checks(named, named_decomposition, nullptr, complete_bipartite(p, q));
      named.count("graphs", p <= q ? 2 : 1);
    }
  }
  reports_.push_back(std::move(named));
  reports_.push_back(std::move(named_decomposition));
}

void Runner::quotients() {
  struct Case {
    std::string name;
    Graph g;
    VertexMask w;
  };
  std::vector<Case> cases{{"K_4, W={3,4}", complete_graph(4), VertexMask{0b1100}}};
  for (int q = 2; q <= 4; ++q) cases.push_back({"SPK_2," + std::to_string(q) + ", W=P", complete_split(2, q), 0b11});
  cases.push_back({"SPK_3,3, W=P", complete_split(3, 3), 0b111});
  for (const auto& c : cases) {
    const auto source = build(c.g);
    const auto target = build(delete_twin_edges(c.g, c.w));
    auto q = build_quotient(source, c.w, target);
    q.report.instance = c.name;
    reports_.push_back(std::move(q.report));
  }

  Report corpus("quotient", "every true-twin set, connected graphs with n <= 5");
  for (int n = 2; n <= 5; ++n) {
    for (const auto& g : connected_graph_classes(n)) {
      const auto source = build(g);
      for (VertexMask w = 1; w < (VertexMask{1} << n); ++w) {
        if (std::popcount(w) < 2 || !is_true_twin_set(g, w)) continue;
        const Graph reduced = delete_twin_edges(g, w);
        if (!is_connected(reduced)) continue;
        const auto target = build(reduced);
        fold(corpus, build_quotient(source, w, target).report, graph_to_json(g) + " W=" + mask_to_string(g, w));
        corpus.count("instances");
      }
    }
  }
  reports_.push_back(std::move(corpus));
}

void Runner::colorings() {
  for (int n = 2; n <= 6; ++n) {
    const auto rg = build(complete_graph(n));
    Report r = check_proper(rg, sign_coloring(rg));
    r.check = "chromatic_complete";
    r.instance = "R(K_" + std::to_string(n) + ")";
    const auto chi = chromatic_number_exact(rg, {.seed = options_.seed});
    r.expect(chi.exact && chi.upper == 2, [&] { return "chromatic number " + std::to_string(chi.upper) + ", expected 2"; });
    r.stats["chromatic_number"] = chi.upper;
    reports_.push_back(std::move(r));
  }

  auto three = [&](const std::string& name, const LiftedColoring& lifted) {
    Report r = check_proper(lifted.rotation, lifted.coloring);
    r.check = "chromatic_three";
    r.instance = name;
    r.expect(lifted.coloring.k == 3, [&] { return "lifted palette has " + std::to_string(lifted.coloring.k) + " colours"; });
    const auto chi = chromatic_number_exact(lifted.rotation, {.seed = options_.seed});
    r.expect(chi.exact && chi.upper == 3, [&] {
      return "chromatic number " + std::to_string(chi.lower) + ".." + std::to_string(chi.upper) +
             (chi.exact ? "" : " (search budget exhausted)") + ", expected 3";
    });
    r.expect(five_cycle_witness(lifted.rotation).has_value(), [] { return std::string("no 5-cycle witness"); });
    r.stats["trees"] = static_cast<std::int64_t>(lifted.rotation.size());
    r.stats["search_nodes"] = static_cast<std::int64_t>(chi.nodes);
    reports_.push_back(std::move(r));
  };
  // Connected non-complete threshold graphs on n <= 6 vertices: words ending
  // in 'u' with at least one 'i'.
  for (int len = 2; len <= 5; ++len) {
    for (int bits = 0; bits < (1 << (len - 1)); ++bits) {
      std::string word;
      for (int k = 0; k < len - 1; ++k) word += (bits >> k) & 1 ? 'u' : 'i';
      word += 'u';
      if (word.find('i') == std::string::npos) continue;
      tick();
      three("threshold:" + word, threshold_coloring(word));
    }
  }
  for (auto [p, q] : {std::pair{2, 2}, {2, 3}, {3, 3}}) {
    tick();
    three("kpq:" + std::to_string(p) + "," + std::to_string(q), bipartite_coloring(p, q));
  }

  Report lifts("lifted_coloring", "every applicable extension, connected graphs with n <= 4");
  for (int n = 1; n <= 4; ++n) {
    for (const auto& g : connected_graph_classes(n)) {
      const auto small = build(g);
      const auto chi = chromatic_number_exact(small, {.seed = options_.seed});
      Coloring base{std::max(3, chi.upper), chi.certificate};
      for (const auto& ext : all_extensions(g)) {
        const auto big = build(ext.big());
        const FamilyTable table(ext, small, big);
        Coloring lifted;
        try {
          lifted = lift_coloring(table, base);
        } catch (const std::invalid_argument&) {
          lifts.count("not_applicable");
          continue;
        }
        fold(lifts, check_proper(big, lifted), ext.describe());
        lifts.expect(lifted.k == base.k, [&] { return ext.describe() + ": palette grew"; });
        lifts.count(to_string(ext.mode()));
      }
    }
  }
  reports_.push_back(std::move(lifts));
}

void Runner::distances() {
  const std::vector<int> k2q{0, 0, 5, 8, 11, 15, 20, 25, 30};
  const int top = options_.deep ? 8 : 6;
  for (int q = 2; q <= top; ++q) {
    const std::string tag = "2_" + std::to_string(q);
    const auto spk = orbit_diameter(complete_split(2, q), "spk_" + tag);
    const auto kpq = orbit_diameter(complete_bipartite(2, q), "kpq_" + tag);
    Report r = split_bipartite_check(2, q, spk.value, kpq.value);
    r.absorb(spk.report);
    r.absorb(kpq.report);
    r.expect(spk.exact && kpq.exact, [] { return std::string("a diameter run was cut short"); });
    r.expect(kpq.value == k2q[q], [&] {
      return "diam(R(K_2," + std::to_string(q) + ")) = " + std::to_string(kpq.value) + ", expected " +
             std::to_string(k2q[q]);
    });
    // Tight exactly where diam(SPK) - 1 = diam(K_2,q).
    const bool tight = q == 4 || q == 5 || q == 8;
    r.expect(r.stats["tight"] == tight, [&] { return std::string("tightness of the twin bound differs"); });
    r.expect(kpq.value <= static_cast<int>(k2q_distance_upper_bound(q)), [&] {
      return "diameter above the broom-path bound " + std::to_string(k2q_distance_upper_bound(q));
    });
    if (q <= 4) {
      auto plain = [&](const Graph& g) {
        DiameterOptions d;
        d.threads = options_.threads;
        return diameter(build(g, false), nullptr, d).value;
      };
      r.expect(plain(complete_split(2, q)) == spk.value && plain(complete_bipartite(2, q)) == kpq.value,
               [] { return std::string("orbit reduction changed a diameter"); });
    }
    r.stats["seconds_ms"] = static_cast<std::int64_t>(1000 * (spk.seconds + kpq.seconds));
    reports_.push_back(std::move(r));
  }

  const std::string dir = options_.data_dir.empty() ? default_data_dir() : options_.data_dir;
  std::vector<std::string> fixtures{"spk_2_3", "spk_2_6"};
  if (options_.deep) fixtures.push_back("spk_2_7");
  for (const auto& name : fixtures) {
    tick();
    reports_.push_back(check_witness(load_witness((std::filesystem::path(dir) / "witness" / (name + ".json")).string()),
                                     options_.caps));
  }

  std::mt19937_64 rng(options_.seed);
  for (const auto& spec : {"complete:4", "path:5", "kpq:2,3", "spk:2,3", "threshold:iuiu"}) {
    const auto rg = build(make_family(parse_family_spec(spec)));
    Report r = rotation_parity_walks(rg, options_.walks, 30, rng);
    r.instance = spec;
    reports_.push_back(std::move(r));
  }

  {
    const auto rg = build(complete_graph(4));
    Report r = twin_rotation_count_check(rg, 2, 3, all_pairs(rg.size()));
    r.instance = "K_4, u,v = 3,4, all pairs";
    reports_.push_back(std::move(r));
    const auto target = build(delete_twin_edges(complete_graph(4), 0b1100));
    const auto q = build_quotient(rg, 0b1100, target);
    Report d = quotient_distance_check(q, all_pairs(rg.size()));
    d.instance = "K_4 -> SPK_2,2, all pairs";
    reports_.push_back(std::move(d));
  }
  {
    const auto rg = build(complete_split(2, 3));
    const auto pairs = sample_pairs(rg.size(), static_cast<std::size_t>(options_.pairs), rng);
    Report r = twin_rotation_count_check(rg, 0, 1, pairs);
    r.instance = "SPK_2,3, u,v = x1,x2, sampled pairs";
    reports_.push_back(std::move(r));
    const auto target = build(complete_bipartite(2, 3));
    const auto q = build_quotient(rg, 0b11, target);
    Report d = quotient_distance_check(q, pairs);
    d.instance = "SPK_2,3 -> K_2,3, sampled pairs";
    reports_.push_back(std::move(d));
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"partitions", "quotients", "colorings", "distances", "all"};
  return names;
}

std::vector<Report> run_suite(std::string_view suite, const VerifyOptions& options) {
  Runner runner(options);
  const bool all = suite == "all";
  if (!all && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
  }
  if (all || suite == "partitions") runner.partitions();
  if (all || suite == "quotients") runner.quotients();
  if (all || suite == "colorings") runner.colorings();
  if (all || suite == "distances") runner.distances();
  return runner.take();
}

}  // namespace rotgraph
