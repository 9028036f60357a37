#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "walklab/graph.hpp"

namespace walklab {

/// Generator of a generalized Sierpinski carpet: the retained level-1
/// subcubes of [0,L]^d, each given by its integer lower corner.
struct CarpetGenerator {
  std::size_t dim = 2;
  std::size_t L = 3;
  std::vector<std::vector<int>> cells;

  std::size_t N() const noexcept { return cells.size(); }
};

CarpetGenerator standard_carpet();
CarpetGenerator full_cube_generator(std::size_t dim, std::size_t L);

CarpetGenerator carpet_from_json(const nlohmann::json& j);
nlohmann::ordered_json carpet_to_json(const CarpetGenerator& gen);

// Names of failed conditions among Symmetry, Connectedness,
// Non-diagonality, Borders-included; empty when the generator is valid.
std::vector<std::string> check_carpet_generator(const CarpetGenerator& gen);

// Number of cells on one face of [0,L]^d.
std::size_t carpet_face_count(const CarpetGenerator& gen);

/// Level-n carpet graph: one vertex per retained unit cube (its lower
/// corner), edges between vertices at distance exactly 1, unit weights,
/// root at the origin. Throws GeneratorDefect naming the failed conditions.
WeightedGraph build_carpet(const CarpetGenerator& gen, std::size_t level);

}  // namespace walklab
