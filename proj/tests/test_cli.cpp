#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rotgraph/cli.hpp"
#include "rotgraph/verify.hpp"
#include "support.hpp"

using namespace rotgraph;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json result() const { return json::parse(out); }
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("connected graph classes match the known counts") {
  const std::vector<std::size_t> counts{1, 1, 2, 6, 21, 112};
  for (int n = 1; n <= 6; ++n) {
    CHECK(connected_graph_classes(n).size() == counts[n - 1]);
    CHECK(connected_graph_classes(n).size() == testsupport::connected_graphs(n).size());
  }
  CHECK_THROWS_AS(connected_graph_classes(8), std::invalid_argument);
}

TEST_CASE("extensions and cliques") {
  const Graph p3 = path_graph(3);
  CHECK(cliques(p3).size() == 5);  // three vertices, two edges
  CHECK(all_extensions(p3).size() == 5 + 3 + 3);
  CHECK(all_extensions(complete_graph(1)).size() == 2);
}

TEST_CASE("witness fixtures load by vertex label") {
  const Witness w = load_witness(default_data_dir() + "/witness/spk_2_3.json");
  CHECK(w.distance == 8);
  CHECK(w.graph.order() == 5);
  CHECK(w.from.path_order() == std::vector<Vertex>{2, 0, 3, 1, 4});
  CHECK(check_witness(w, Caps{}).passed);

  const auto bad = temp_file("rotgraph_bad_witness.json");
  write(bad, R"({"graph": "spk:2,3", "from": ["y1", "z9"], "to": [], "distance": 1})");
  CHECK_THROWS_AS(load_witness(bad.string()), std::invalid_argument);
  write(bad, R"({"graph": "kpq:2,2", "from": ["x1", "x2", "y1", "y2"], "to": ["x1", "x2", "y1", "y2"], "distance": 0})");
  CHECK_THROWS_AS(load_witness(bad.string()), std::invalid_argument);  // x1 x2 is not an edge of K_2,2
  write(bad, R"({"graph": "spk:2,3", "from": ["y1", "x1", "y2", "x2", "y3"], "to": ["y3", "y2", "x2", "x1", "y1"], "distance": 7})");
  CHECK_FALSE(check_witness(load_witness(bad.string()), Caps{}).passed);
  std::filesystem::remove(bad);
  CHECK_THROWS_AS(load_witness("/nonexistent/witness.json"), std::runtime_error);
}

TEST_CASE("caps from the environment") {
  Caps caps;
  setenv("ROTGRAPH_MAX_TREES", "1234", 1);
  setenv("ROTGRAPH_MAX_MEMORY_MB", "1", 1);
  caps.apply_environment();
  CHECK(caps.max_trees == 1234);
  CHECK(caps.tree_cap() <= 1234);
  CHECK(caps.tree_cap() > 0);
  setenv("ROTGRAPH_MAX_TREES", "-3", 1);
  CHECK_THROWS_AS(caps.apply_environment(), std::invalid_argument);
  unsetenv("ROTGRAPH_MAX_TREES");
  unsetenv("ROTGRAPH_MAX_MEMORY_MB");
}

TEST_CASE("build reports sizes and writes exports") {
  auto r = cli({"build", "--family", "spk:2,2"});
  CHECK(r.code == kExitPass);
  CHECK(r.result()["vertices"] == 22);
  CHECK(r.result()["schema"] == 1);

  r = cli({"build", "--family", "path:6"});
  CHECK(r.result()["vertices"] == 132);

  const auto dot = temp_file("rotgraph_k4.dot");
  r = cli({"build", "--family", "complete:4", "--dot", dot.string()});
  CHECK(r.code == kExitPass);
  std::ifstream in(dot);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("graph") != std::string::npos);
  std::filesystem::remove(dot);

  r = cli({"build", "--family", "complete:6", "--max-trees", "100"});
  CHECK(r.code == kExitUsage);
  CHECK(r.result()["discovered"] == 101);
}

TEST_CASE("outputs are byte-stable for a fixed configuration") {
  const auto a = cli({"build", "--family", "kpq:2,3"});
  const auto b = cli({"build", "--family", "kpq:2,3"});
  CHECK(a.out == b.out);
  const auto c = cli({"--seed", "7", "chromatic", "--family", "threshold:iiu", "--exact"});
  const auto d = cli({"--seed", "7", "chromatic", "--family", "threshold:iiu", "--exact"});
  CHECK(c.out == d.out);
}

TEST_CASE("graph input from a file") {
  const auto path = temp_file("rotgraph_c4.txt");
  write(path, "# n 4\n0 1\n1 2\n2 3\n3 0\n");
  auto r = cli({"build", "--graph", path.string()});
  CHECK(r.code == kExitPass);
  CHECK(r.result()["vertices"] == 20);
  r = cli({"diameter", "--graph", path.string(), "--orbits", "none"});
  CHECK(r.result()["value"] == 5);
  std::filesystem::remove(path);
}

TEST_CASE("chromatic, diameter and distance commands") {
  auto r = cli({"chromatic", "--family", "spk:3,3", "--exact"});
  CHECK(r.code == kExitPass);
  CHECK(r.result()["chromatic_number"] == 3);
  r = cli({"chromatic", "--family", "complete:5", "--exact"});
  CHECK(r.result()["chromatic_number"] == 2);
  r = cli({"chromatic", "--lifted", "kpq:2,3", "--exact"});
  CHECK(r.code == kExitPass);
  CHECK(r.result()["lifted"]["proper"] == true);
  CHECK(r.result()["chromatic_number"] == 3);
  r = cli({"chromatic", "--lifted", "threshold:iiuiu"});
  CHECK(r.code == kExitPass);
  CHECK(r.result()["lifted"]["k"] == 3);
  r = cli({"chromatic", "--lifted", "path:4"});
  CHECK(r.code == kExitUsage);

  r = cli({"diameter", "--family", "kpq:2,4"});
  CHECK(r.code == kExitPass);
  CHECK(r.result()["value"] == 11);
  CHECK(r.result()["witness_pair"].size() == 2);
  r = cli({"diameter", "--family", "kpq:2,3", "--orbits", "none", "--max-sources", "3"});
  CHECK(r.code == kExitUsage);  // a lower bound only
  CHECK(r.result()["exact"] == false);

  r = cli({"distance", "--witness", default_data_dir() + "/witness/spk_2_3.json"});
  CHECK(r.code == kExitPass);
  CHECK(r.result()["distance"] == 8);

  const auto from = temp_file("rotgraph_from.json");
  const auto to = temp_file("rotgraph_to.json");
  std::vector<Vertex> a{0, 1, 2};
  std::vector<Vertex> b{2, 1, 0};
  write(from, tree_to_json(ElimTree::path(a)));
  write(to, tree_to_json(ElimTree::path(b)));
  r = cli({"distance", "--family", "complete:3", "--from", from.string(), "--to", to.string()});
  CHECK(r.code == kExitPass);
  CHECK(r.result()["distance"] == 3);
  std::vector<Vertex> chain{1, 0, 2};
  write(from, tree_to_json(ElimTree::path(chain)));
  r = cli({"distance", "--family", "path:3", "--from", from.string(), "--to", to.string()});
  CHECK(r.code == kExitUsage);  // removing 1 from the path 0-1-2 separates 0 and 2
  std::filesystem::remove(from);
  std::filesystem::remove(to);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"build"}).code == kExitUsage);
  CHECK(cli({"build", "--family", "complete:3", "--graph", "x.txt"}).code == kExitUsage);
  CHECK(cli({"build", "--family", "nonsense:3"}).code == kExitUsage);
  CHECK(cli({"verify", "--suite", "nonsense"}).code == kExitUsage);
  CHECK(cli({"diameter", "--family", "complete:3", "--orbits", "some"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitPass);
}

TEST_CASE("verify suites pass and fail through the exit code") {
  auto r = cli({"verify", "--suite", "quotients"});
  CHECK(r.code == kExitPass);
  CHECK(r.result()["passed"] == true);
  CHECK(r.result()["reports"].size() >= 6);

  // A fixture with a wrong distance makes the distances suite fail.
  const auto dir = std::filesystem::temp_directory_path() / "rotgraph_data";
  std::filesystem::create_directories(dir / "witness");
  for (const char* name : {"spk_2_3.json", "spk_2_6.json"}) {
    std::filesystem::copy_file(std::filesystem::path(default_data_dir()) / "witness" / name, dir / "witness" / name,
                               std::filesystem::copy_options::overwrite_existing);
  }
  write(dir / "witness" / "spk_2_3.json",
        R"({"graph": "spk:2,3", "from": ["y1", "x1", "y2", "x2", "y3"], "to": ["y3", "y2", "x2", "x1", "y1"], "distance": 9})");
  r = cli({"verify", "--suite", "distances", "--data-dir", dir.string(), "--walks", "20", "--pairs", "50"});
  CHECK(r.code == kExitCheckFailed);
  CHECK(r.result()["passed"] == false);
  std::filesystem::remove_all(dir);

  r = cli({"verify", "--suite", "colorings", "--time-budget", "1"});
  CHECK((r.code == kExitPass || r.code == kExitUsage));
}
