#pragma once

#include <cstdint>
#include <string>

#include "walklab/graph.hpp"

namespace walklab {

/// Conductance law. iid kinds draw one value per edge keyed by (seed, edge
/// id). cell_symmetric draws uniform[a,b] per (cell, V_0 pair) keyed by
/// (seed, cell, pair), so every cell gets an independent copy of the same
/// weight vector law. Lognormal: log-mean at the midpoint of [ln a, ln b],
/// log-sd a quarter of that width, clipped to [a,b].
struct WeightLaw {
  enum class Kind { constant, iid_uniform, iid_lognormal_clipped, cell_symmetric };
  Kind kind = Kind::constant;
  double a = 1.0;
  double b = 1.0;
  std::uint64_t seed = 0;
};

WeightLaw::Kind weight_kind_from_string(const std::string& s);
const char* to_string(WeightLaw::Kind k);

void validate_law(const WeightLaw& law);

// The value a law assigns to the edge with the given key.
double draw_weight(const WeightLaw& law, std::uint64_t key);
std::uint64_t cell_pair_key(std::uint64_t cell, std::uint64_t pair);

WeightedGraph assign_weights(const WeightedGraph& g, const WeightLaw& law);

}  // namespace walklab
