#include "walklab/graph_io.hpp"

#include <fstream>

#include "walklab/error.hpp"

namespace walklab {

nlohmann::ordered_json graph_to_json(const WeightedGraph& g) {
  nlohmann::ordered_json out;
  auto vertices = nlohmann::ordered_json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    nlohmann::ordered_json jv;
    jv["id"] = v;
    auto c = g.coord(v);
    jv["coords"] = std::vector<double>(c.begin(), c.end());
    if (g.has_exact_coords()) {
      auto ex = nlohmann::ordered_json::array();
      for (const Rational& r : g.exact_coord(v)) ex.push_back(format_rational(r));
      jv["exact"] = ex;
    }
    vertices.push_back(std::move(jv));
  }
  auto edges = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edges()[i];
    nlohmann::ordered_json je;
    je["u"] = e.u;
    je["v"] = e.v;
    je["w"] = e.weight;
    if (g.has_cell_tags()) {
      je["cell"] = g.cell_tags()[i].cell;
      je["pair"] = g.cell_tags()[i].pair;
    }
    edges.push_back(std::move(je));
  }
  out["vertices"] = std::move(vertices);
  out["edges"] = std::move(edges);
  out["root"] = g.root();
  return out;
}

WeightedGraph graph_from_json(const nlohmann::json& j) {
  try {
    WeightedGraph::Parts p;
    const auto& vs = j.at("vertices");
    p.num_vertices = vs.size();
    require(p.num_vertices > 0, ErrorKind::InvalidArgument, "graph has no vertices");
    p.dim = vs.at(0).at("coords").size();
    p.coords.resize(p.num_vertices * p.dim);
    const bool exact = vs.at(0).contains("exact");
    if (exact) p.exact.resize(p.num_vertices);
    std::vector<bool> seen(p.num_vertices, false);
    for (const auto& jv : vs) {
      const auto id = jv.at("id").get<std::size_t>();
      require(id < p.num_vertices && !seen[id], ErrorKind::InvalidArgument,
              "vertex ids must be a permutation of 0..n-1");
      seen[id] = true;
      const auto c = jv.at("coords").get<std::vector<double>>();
      require(c.size() == p.dim, ErrorKind::InvalidArgument, "inconsistent coordinate dimension");
      std::copy(c.begin(), c.end(), p.coords.begin() + static_cast<std::ptrdiff_t>(id * p.dim));
      if (exact) {
        for (const auto& s : jv.at("exact")) p.exact[id].push_back(parse_rational(s.get<std::string>()));
      }
    }
    for (const auto& je : j.at("edges")) {
      p.edges.push_back({je.at("u").get<VertexId>(), je.at("v").get<VertexId>(),
                         je.at("w").get<double>()});
      if (je.contains("cell")) {
        p.cell_tags.push_back({je.at("cell").get<std::uint32_t>(), je.at("pair").get<std::uint32_t>()});
      }
    }
    p.root = j.at("root").get<VertexId>();
    return WeightedGraph(std::move(p));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed graph JSON: ") + e.what());
  }
}

void write_graph(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::InvalidArgument, "cannot open " + path);
  out << graph_to_json(g).dump(1) << '\n';
}

WeightedGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::InvalidArgument, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed graph JSON: ") + e.what());
  }
  return graph_from_json(j);
}

}  // namespace walklab
