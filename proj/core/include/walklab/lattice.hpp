#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "walklab/graph.hpp"

namespace walklab {

// Box [-H,H]^d of Z^d, nearest-neighbour unit edges, root at the origin.
WeightedGraph build_lattice_box(std::size_t d, std::size_t H);

// Small graphs used as fixtures. Vertices carry 1-d coordinates 0..n-1
// unless noted.
WeightedGraph graph_from_edges(std::size_t n, const std::vector<Edge>& edges, VertexId root = 0);
WeightedGraph path_graph(std::size_t n);
WeightedGraph cycle_graph(std::size_t n);      // 2-d coordinates on the unit circle
WeightedGraph complete_graph(std::size_t n);

/// Connected random graph: a random spanning tree plus `extra` random
/// edges, weights uniform in [a,b].
WeightedGraph random_weighted_graph(std::size_t n, std::size_t extra, std::uint64_t seed,
                                    double a = 0.5, double b = 2.0);

}  // namespace walklab
