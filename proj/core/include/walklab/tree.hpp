#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "walklab/graph.hpp"

namespace walklab {

inline constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

/// Rooted ordered tree. Vertex 0 is the root; children lists are ordered.
/// Trees produced by the codec number vertices in depth-first preorder.
struct OrderedTree {
  std::vector<std::size_t> parent;
  std::vector<std::vector<std::size_t>> children;

  std::size_t size() const noexcept { return parent.size(); }
  static OrderedTree from_parents(const std::vector<std::size_t>& parent);
};

bool operator==(const OrderedTree& a, const OrderedTree& b);

/// Samples w(i/2n), i = 0..2n. Convention for an n-vertex tree: the contour
/// walk visits 2n-1 vertices v_0..v_{2n-2} (each edge once down, once up)
/// and w = (0, depth(v_0), ..., depth(v_{2n-2}), 0), i.e. one root sample
/// of padding at each end.
struct Excursion {
  std::vector<double> samples;

  std::size_t size_n() const noexcept { return (samples.size() - 1) / 2; }
};

Excursion excursion_from_tree(const OrderedTree& t);
OrderedTree tree_from_excursion(const Excursion& e);

// Vertex visited by the contour at sample index i (padding maps to the root).
std::vector<std::size_t> contour_vertices(const OrderedTree& t);
// First sample index at which each vertex is visited.
std::vector<std::size_t> first_visit_index(const OrderedTree& t);

std::vector<std::size_t> depths(const OrderedTree& t);
std::size_t tree_distance(const OrderedTree& t, std::size_t u, std::size_t v);

// d_w(s,t) = w(s) + w(t) - 2 min_{[s,t]} w.
double excursion_distance(const Excursion& e, std::size_t s, std::size_t t);

/// Uniform ordered tree on n vertices: a uniform arrangement of n-1 up and
/// n down steps rotated by the cycle lemma into a Dyck path.
OrderedTree sample_uniform_tree(std::size_t n, std::uint64_t seed);

// Unit-weight graph, root 0, 1-d coordinate = first visit index.
WeightedGraph tree_to_graph(const OrderedTree& t);

}  // namespace walklab
