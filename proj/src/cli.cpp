#include "rotgraph/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotgraph/coloring.hpp"
#include "rotgraph/metrics.hpp"
#include "rotgraph/verify.hpp"

namespace rotgraph {

namespace {

using nlohmann::json;

constexpr int kSchema = 1;

// Caps raised by --deep for single diameter runs on the largest instances.
constexpr std::size_t kDeepMaxTrees = 20'000'000;

struct GraphSource {
  std::string family;
  std::string file;

  void add_to(CLI::App& cmd) {
    auto* f = cmd.add_option("--family", family, "family spec: complete:n, path:n, star:q, kpq:p,q, spk:p,q, threshold:<word>");
    auto* g = cmd.add_option("--graph", file, "graph file (.json or edge list)");
    f->excludes(g);
  }

  bool given() const { return !family.empty() || !file.empty(); }

  Graph load() const {
    if (!family.empty()) return make_family(parse_family_spec(family));
    if (!file.empty()) return load_graph_file(file);
    throw CLI::ValidationError("exactly one of --family and --graph is required");
  }

  std::string name() const { return family.empty() ? file : parse_family_spec(family).to_string(); }
};

struct CapOptions {
  std::optional<std::size_t> max_trees;
  std::optional<std::size_t> max_memory_mb;
  std::optional<double> time_budget;

  void add_to(CLI::App& cmd, bool with_time) {
    cmd.add_option("--max-trees", max_trees, "cap on trees of a rotation graph")->check(CLI::PositiveNumber);
    cmd.add_option("--max-memory-mb", max_memory_mb, "approximate memory cap")->check(CLI::PositiveNumber);
    if (with_time) cmd.add_option("--time-budget", time_budget, "wall-clock seconds")->check(CLI::PositiveNumber);
  }

  // Flags override the environment, which overrides the defaults.
  Caps resolve(std::size_t default_trees = Caps{}.max_trees) const {
    Caps caps;
    caps.max_trees = default_trees;
    caps.apply_environment();
    if (max_trees) caps.max_trees = *max_trees;
    if (max_memory_mb) caps.max_memory_mb = *max_memory_mb;
    if (time_budget) caps.time_budget = *time_budget;
    return caps;
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

json header(const std::string& command) { return json{{"schema", kSchema}, {"command", command}}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json witness_json(const RotationGraph& rg, std::pair<Ordinal, Ordinal> w) {
  return json::array({json::parse(tree_to_json(rg.tree(w.first))), json::parse(tree_to_json(rg.tree(w.second)))});
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotation graphs of small graphs: construction, structure checks, colourings and distances"};
  app.require_subcommand(1);
  std::uint64_t seed = 1;
  unsigned threads = 0;
  app.add_option("--seed", seed, "seed for every randomised step")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0: available parallelism)")->capture_default_str();

  // build
  auto* build = app.add_subcommand("build", "build R(G) and report its size");
  GraphSource build_src;
  build_src.add_to(*build);
  CapOptions build_caps;
  build_caps.add_to(*build, false);
  std::string json_path, dot_path, binary_path;
  bool edge_labels = true;
  build->add_option("--json", json_path, "write trees and labelled edges as JSON");
  build->add_option("--dot", dot_path, "write Graphviz DOT");
  build->add_option("--binary", binary_path, "write the binary edge list");
  build->add_flag("--edge-labels,!--no-edge-labels", edge_labels, "keep the rotated pair of every edge");

  // verify
  auto* verify = app.add_subcommand("verify", "run a verification suite over the built-in corpus");
  std::string suite = "all";
  VerifyOptions vopts;
  CapOptions verify_caps;
  std::string report_path;
  verify->add_option("--suite", suite, "partitions | quotients | colorings | distances | all")
      ->check(CLI::IsMember(suite_names()))
      ->capture_default_str();
  verify->add_flag("--deep", vopts.deep, "add the q = 7, 8 diameter runs");
  verify->add_option("--walks", vopts.walks, "sampled walks per instance for the parity law")->capture_default_str();
  verify->add_option("--pairs", vopts.pairs, "sampled pairs for the twin and quotient distance checks")->capture_default_str();
  verify->add_option("--checkpoint-dir", vopts.checkpoint_dir, "keep diameter progress here");
  verify->add_option("--data-dir", vopts.data_dir, "directory holding witness/");
  verify->add_option("--out", report_path, "also write the JSON report to this file");
  verify_caps.add_to(*verify, true);

  // chromatic
  auto* chromatic = app.add_subcommand("chromatic", "chromatic number of R(G), or a lifted 3-colouring");
  GraphSource chrom_src;
  chrom_src.add_to(*chromatic);
  CapOptions chrom_caps;
  chrom_caps.add_to(*chromatic, false);
  bool exact = false;
  std::string lifted;
  std::string coloring_path;
  std::uint64_t budget = ChromaticOptions{}.budget;
  chromatic->add_flag("--exact", exact, "prove the chromatic number by search");
  chromatic->add_option("--lifted", lifted, "build the lifted colouring: threshold:<word> or kpq:p,q");
  chromatic->add_option("--budget", budget, "search nodes per colour count")->capture_default_str();
  chromatic->add_option("--coloring-out", coloring_path, "write the colouring as JSON");

  // diameter
  auto* diam = app.add_subcommand("diameter", "diameter of R(G) by BFS");
  GraphSource diam_src;
  diam_src.add_to(*diam);
  CapOptions diam_caps;
  diam_caps.add_to(*diam, false);
  std::string orbits = "auto";
  bool deep = false;
  std::string checkpoint;
  std::size_t max_sources = 0;
  int spot_checks = 2;
  diam->add_option("--orbits", orbits, "auto: BFS from twin-class orbit representatives; none: from every tree")
      ->check(CLI::IsMember({"auto", "none"}))
      ->capture_default_str();
  diam->add_flag("--deep", deep, "raise the default tree cap for the largest instances");
  diam->add_option("--checkpoint", checkpoint, "progress file, reused on restart");
  diam->add_option("--max-sources", max_sources, "stop early; the value is then a lower bound");
  diam->add_option("--spot-checks", spot_checks, "orbits whose eccentricity is re-checked")->capture_default_str();

  // distance
  auto* dist = app.add_subcommand("distance", "distance between two trees of R(G)");
  GraphSource dist_src;
  dist_src.add_to(*dist);
  CapOptions dist_caps;
  dist_caps.add_to(*dist, false);
  std::string from_path, to_path, witness_path;
  auto* from_opt = dist->add_option("--from", from_path, "tree JSON {\"parent\": [...]}");
  auto* to_opt = dist->add_option("--to", to_path, "tree JSON");
  auto* witness_opt = dist->add_option("--witness", witness_path, "witness fixture (graph, from, to, distance)");
  from_opt->needs(to_opt);
  to_opt->needs(from_opt);
  witness_opt->excludes(from_opt)->excludes(to_opt);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (build->parsed()) {
      const auto start = std::chrono::steady_clock::now();
      const Graph g = build_src.load();
      BuildOptions options;
      options.max_trees = build_caps.resolve().tree_cap();
      options.edge_labels = edge_labels;
      json result = header("build");
      result["graph"] = build_src.name();
      try {
        const auto rg = build_rotation_graph(g, options);
        if (!json_path.empty()) write_file(json_path, rotation_graph_to_json(rg));
        if (!dot_path.empty()) write_file(dot_path, rotation_graph_to_dot(rg));
        if (!binary_path.empty()) write_file(binary_path, rotation_graph_to_binary(rg));
        result["vertices"] = rg.size();
        result["edges"] = rg.edge_count();
        result["parallel_rotations"] = rg.parallel_rotations();
      } catch (const CapExceeded& e) {
        result["error"] = e.what();
        result["discovered"] = e.discovered();
        out << result.dump(2) << "\n";
        return kExitUsage;
      }
      err << "built in " << seconds_since(start) << " s\n";
      out << result.dump(2) << "\n";
      return kExitPass;
    }

    if (verify->parsed()) {
      vopts.seed = seed;
      vopts.threads = threads;
      vopts.caps = verify_caps.resolve();
      const auto reports = run_suite(suite, vopts);
      json result = header("verify");
      result["suite"] = suite;
      result["deep"] = vopts.deep;
      bool passed = true;
      json list = json::array();
      for (const auto& r : reports) {
        passed = passed && r.passed;
        list.push_back(json::parse(r.to_json()));
        err << (r.passed ? "pass " : "FAIL ") << r.check << " [" << r.instance << "]\n";
      }
      result["passed"] = passed;
      result["reports"] = std::move(list);
      if (!report_path.empty()) write_file(report_path, result.dump(2) + "\n");
      out << result.dump(2) << "\n";
      return passed ? kExitPass : kExitCheckFailed;
    }

    if (chromatic->parsed()) {
      json result = header("chromatic");
      ChromaticOptions copts;
      copts.budget = budget;
      copts.seed = seed;
      if (!lifted.empty()) {
        if (chrom_src.given()) throw CLI::ValidationError("--lifted names its own graph; drop --family/--graph");
        const auto spec = parse_family_spec(lifted);
        if (spec.kind != Family::threshold && spec.kind != Family::complete_bipartite) {
          throw std::invalid_argument("--lifted takes threshold:<word> or kpq:p,q");
        }
        const LiftedColoring lc = spec.kind == Family::threshold
                                      ? threshold_coloring(spec.word)
                                      : bipartite_coloring(spec.params.at(0), spec.params.at(1));
        const Report check = check_proper(lc.rotation, lc.coloring);
        result["graph"] = spec.to_string();
        result["trees"] = lc.rotation.size();
        result["lifted"] = {{"k", lc.coloring.k}, {"proper", check.passed}};
        if (!check.passed) result["lifted"]["report"] = json::parse(check.to_json());
        if (!coloring_path.empty()) write_file(coloring_path, coloring_to_json(lc.coloring) + "\n");
        bool ok = check.passed;
        if (exact) {
          const auto chi = chromatic_number_exact(lc.rotation, copts);
          result["lower"] = chi.lower;
          result["upper"] = chi.upper;
          result["exact"] = chi.exact;
          if (chi.exact) result["chromatic_number"] = chi.upper;
          ok = ok && (!chi.exact || chi.upper == lc.coloring.k);
          if (ok && !chi.exact) {
            out << result.dump(2) << "\n";
            return kExitUsage;
          }
        }
        out << result.dump(2) << "\n";
        return ok ? kExitPass : kExitCheckFailed;
      }
      BuildOptions options;
      options.max_trees = chrom_caps.resolve().tree_cap();
      options.edge_labels = false;
      const auto rg = build_rotation_graph(chrom_src.load(), options);
      result["graph"] = chrom_src.name();
      result["trees"] = rg.size();
      if (!exact) copts.budget = 0;
      const auto chi = chromatic_number_exact(rg, copts);
      result["lower"] = chi.lower;
      result["upper"] = chi.upper;
      result["exact"] = chi.exact;
      if (chi.exact) result["chromatic_number"] = chi.upper;
      if (!coloring_path.empty()) write_file(coloring_path, coloring_to_json(Coloring{chi.upper, chi.certificate}) + "\n");
      out << result.dump(2) << "\n";
      return exact && !chi.exact ? kExitUsage : kExitPass;
    }

    if (diam->parsed()) {
      const Graph g = diam_src.load();
      BuildOptions options;
      options.max_trees = diam_caps.resolve(deep ? kDeepMaxTrees : Caps{}.max_trees).tree_cap();
      options.edge_labels = false;
      const auto start = std::chrono::steady_clock::now();
      const auto rg = build_rotation_graph(g, options);
      std::optional<OrbitSet> orbit_set;
      if (orbits == "auto") orbit_set = orbit_reduce(rg, twin_class_generators(g));
      DiameterOptions d;
      d.threads = threads;
      d.seed = seed;
      d.checkpoint = checkpoint;
      d.max_sources = max_sources;
      d.spot_checks = spot_checks;
      const auto r = diameter(rg, orbit_set ? &*orbit_set : nullptr, d);
      json result = header("diameter");
      result["graph"] = diam_src.name();
      result["trees"] = rg.size();
      result["value"] = r.value;
      result["exact"] = r.exact;
      result["witness_pair"] = witness_json(rg, r.witness);
      result["sources_run"] = r.sources_run;
      result["sources_total"] = r.sources_total;
      result["spot_checks"] = json::parse(r.report.to_json());
      result["runtime"] = seconds_since(start);
      out << result.dump(2) << "\n";
      if (!r.report.passed) return kExitCheckFailed;
      return r.exact ? kExitPass : kExitUsage;
    }

    if (dist->parsed()) {
      Graph g(1);
      ElimTree a;
      ElimTree b;
      std::optional<int> expected;
      std::string name;
      if (!witness_path.empty()) {
        if (dist_src.given()) throw CLI::ValidationError("--witness names its own graph; drop --family/--graph");
        const Witness w = load_witness(witness_path);
        g = w.graph;
        a = w.from;
        b = w.to;
        expected = w.distance;
        name = w.family.to_string();
      } else {
        if (from_path.empty()) throw CLI::ValidationError("give --from and --to, or --witness");
        g = dist_src.load();
        a = load_tree_file(from_path);
        b = load_tree_file(to_path);
        name = dist_src.name();
      }
      for (const ElimTree* t : {&a, &b}) {
        if (!validate(g, *t)) throw std::invalid_argument("tree " + t->to_string() + " is not a search tree on the graph");
      }
      BuildOptions options;
      options.max_trees = dist_caps.resolve().tree_cap();
      options.edge_labels = false;
      const auto rg = build_rotation_graph(g, options);
      const int value = distance(rg, rg.at(a), rg.at(b));
      json result = header("distance");
      result["graph"] = name;
      result["from"] = json::parse(tree_to_json(a));
      result["to"] = json::parse(tree_to_json(b));
      result["distance"] = value;
      if (expected) {
        result["expected"] = *expected;
        result["passed"] = value == *expected;
      }
      out << result.dump(2) << "\n";
      return expected && value != *expected ? kExitCheckFailed : kExitPass;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    // Internal consistency checks of the library.
    err << "check failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    // Caps, time budget, I/O and usage errors.
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace rotgraph
