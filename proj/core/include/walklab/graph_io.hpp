#pragma once

#include <string>

#include <json.hpp>

#include "walklab/graph.hpp"

namespace walklab {

// {vertices:[{id,coords[,exact]}], edges:[{u,v,w[,cell,pair]}], root}
nlohmann::ordered_json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const nlohmann::json& j);

void write_graph(const WeightedGraph& g, const std::string& path);
WeightedGraph read_graph(const std::string& path);

}  // namespace walklab
