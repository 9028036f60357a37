#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "walklab/graph.hpp"
#include "walklab/tree.hpp"

namespace walklab {

// psi(x) = linear * x / L + shift, linear an isometry (row-major d x d).
struct AffineMap {
  std::vector<double> linear;
  std::vector<double> shift;
};

struct ExactAffineMap {
  std::vector<Rational> linear;
  std::vector<Rational> shift;
};

/// Iterated function system of L^{-1}-similitudes together with its
/// essential fixed points V_0. Points live in "IFS coordinates"; the
/// Euclidean embedding is basis * x (basis row-major d x d). The exact
/// variant keeps maps and V_0 as rationals so that gluing cells needs no
/// tolerance; it requires an integer L.
struct IfsSpec {
  std::string name;
  std::size_t dim = 0;
  double L = 2.0;
  std::vector<double> basis;  // empty means identity
  std::vector<std::vector<double>> v0;
  std::vector<AffineMap> maps;

  bool exact = false;
  std::vector<RationalPoint> exact_v0;
  std::vector<ExactAffineMap> exact_maps;

  std::size_t N() const noexcept { return maps.size(); }
};

IfsSpec sierpinski_gasket();
IfsSpec vicsek_cross();

IfsSpec ifs_from_json(const nlohmann::json& j);
nlohmann::ordered_json ifs_to_json(const IfsSpec& ifs);

// Euclidean image of an IFS-coordinate point.
std::vector<double> embed_point(const IfsSpec& ifs, const std::vector<double>& x);

/// Similitude check on sampled pairs plus the level-2 ramification check:
/// level-2 points of two distinct level-1 cells may coincide only at points
/// of both cells' V_0 images. Throws GeneratorDefect.
void validate_ifs(const IfsSpec& ifs);

struct Prefractal {
  WeightedGraph graph;
  // cells[w][k] = vertex id of L^n psi_w(V_0[k]); words in lexicographic order.
  std::vector<std::vector<VertexId>> cells;
  // boundary[k] = vertex id of L^n V_0[k].
  std::vector<VertexId> boundary;
};

// Unordered V_0 pairs (i<j) in the enumeration order used for cell tags.
std::vector<std::pair<std::size_t, std::size_t>> v0_pairs(std::size_t m);

/// Level-n prefractal graph, embedded at scale L^n, unit weights, one edge
/// per V_0 pair inside each level-n cell, root at the image of V_0[0].
Prefractal build_prefractal_cells(const IfsSpec& ifs, std::size_t level);
WeightedGraph build_prefractal(const IfsSpec& ifs, std::size_t level);

/// Cell-adjacency graph of level-n cells (nodes are words, adjacent when
/// their V_0 images share a point). Throws NotTreeLike on a cycle and
/// InvalidArgument when |V_0| != 4.
OrderedTree build_vicsek_adjacency_tree(const IfsSpec& ifs, std::size_t level);

}  // namespace walklab
