#include <algorithm>
#include <cstring>

#include "json.hpp"
#include "rotgraph/rotation.hpp"

namespace rotgraph {

namespace {

constexpr const char* kPalette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
                                    "#ff7f00", "#ffff33", "#a65628", "#f781bf"};

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t k = 0; k < sizeof(T); ++k) out += static_cast<char>((value >> (8 * k)) & 0xFF);
}

}  // namespace

std::string pair_label(const Graph& g, RotatedPair pair) {
  const auto a = g.label(pair.upper);
  const auto b = g.label(pair.lower);
  return a.size() == 1 && b.size() == 1 ? a + b : a + "-" + b;
}

std::string rotation_graph_to_dot(const RotationGraph& rg, std::span<const int> fill_colors) {
  if (!fill_colors.empty() && fill_colors.size() != rg.size()) {
    throw std::invalid_argument("one fill color per tree is required");
  }
  std::string out = "graph R {\n  node [shape=box];\n";
  for (Ordinal o = 0; o < rg.size(); ++o) {
    out += "  " + std::to_string(o) + " [label=\"" + rg.tree(o).to_string(rg.graph()) + "\"";
    if (!fill_colors.empty()) {
      const auto c = static_cast<std::size_t>(fill_colors[o]) % std::size(kPalette);
      out += std::string(" style=filled fillcolor=\"") + kPalette[c] + "\"";
    }
    out += "];\n";
  }
  for (Ordinal a = 0; a < rg.size(); ++a) {
    const auto row = rg.neighbors(a);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] < a) continue;
      out += "  " + std::to_string(a) + " -- " + std::to_string(row[k]);
      if (rg.has_labels()) out += " [label=\"" + pair_label(rg.graph(), rg.labels(a)[k]) + "\"]";
      out += ";\n";
    }
  }
  out += "}\n";
  return out;
}

std::string rotation_graph_to_json(const RotationGraph& rg) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : rg.trees()) trees.push_back(nlohmann::json::parse(tree_to_json(t)));
  nlohmann::json edges = nlohmann::json::array();
  for (Ordinal a = 0; a < rg.size(); ++a) {
    const auto row = rg.neighbors(a);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] < a) continue;
      nlohmann::json e = {a, row[k]};
      if (rg.has_labels()) e.push_back(pair_label(rg.graph(), rg.labels(a)[k]));
      edges.push_back(std::move(e));
    }
  }
  nlohmann::json j;
  j["trees"] = std::move(trees);
  j["edges"] = std::move(edges);
  return j.dump();
}

std::string rotation_graph_to_binary(const RotationGraph& rg) {
  std::string out = "RGEL";
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(rg.size()));
  put_le<std::uint64_t>(out, rg.edge_count());
  for (Ordinal a = 0; a < rg.size(); ++a) {
    for (Ordinal b : rg.neighbors(a)) {
      if (b < a) continue;
      put_le<std::uint32_t>(out, a);
      put_le<std::uint32_t>(out, b);
    }
  }
  return out;
}

}  // namespace rotgraph
