#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rotgraph/graph.hpp"

namespace rotgraph {

using nlohmann::json;

std::string graph_to_json(const Graph& g) {
  json j;
  j["n"] = g.order();
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  if (g.has_labels()) j["labels"] = g.labels();
  return j.dump();
}

Graph graph_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("graph JSON: ") + e.what());
  }
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    throw std::invalid_argument("graph JSON: missing integer field 'n'");
  }
  std::vector<Graph::Edge> edges;
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("graph JSON: edge must be [u,v]");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  return Graph(j["n"].get<int>(), edges, std::move(labels));
}

std::string graph_to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "# n " << g.order() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

Graph graph_from_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Graph::Edge> edges;
  int declared = -1;
  int max_id = -1;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      std::istringstream comment(line.substr(hash + 1));
      std::string key;
      int value = 0;
      if (comment >> key >> value && key == "n") declared = value;
      line.erase(hash);
    }
    std::istringstream fields(line);
    int u = 0;
    int v = 0;
    if (!(fields >> u)) continue;
    if (!(fields >> v)) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": expected 'u v'");
    }
    edges.emplace_back(u, v);
    max_id = std::max({max_id, u, v});
  }
  const int n = declared > 0 ? declared : max_id + 1;
  if (n < 1) throw std::invalid_argument("edge list defines no vertices");
  return Graph(n, edges);
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    return graph_from_json(buf.str());
  }
  return graph_from_edge_list(buf.str());
}

}  // namespace rotgraph
