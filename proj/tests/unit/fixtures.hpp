#pragma once

#include <cmath>
#include <vector>

#include "walklab/graph.hpp"
#include "walklab/lattice.hpp"

namespace fx {

inline walklab::WeightedGraph two_vertex() { return walklab::path_graph(2); }
// a-b-c with a = 0.
inline walklab::WeightedGraph path3() { return walklab::path_graph(3); }
inline walklab::WeightedGraph triangle() { return walklab::complete_graph(3); }

inline bool close(double a, double b, double rel = 1e-12, double abs = 1e-14) {
  return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace fx
