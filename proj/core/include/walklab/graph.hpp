#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace walklab {

using VertexId = std::size_t;
using Rational = boost::rational<std::int64_t>;
using RationalPoint = std::vector<Rational>;

Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double weight = 1.0;
};

// Which level-n cell and which unordered pair of boundary points an edge of
// a prefractal graph came from. Needed for cell-symmetric weight laws.
struct CellTag {
  std::uint32_t cell = 0;
  std::uint32_t pair = 0;
};

struct Neighbor {
  VertexId to = 0;
  double weight = 0.0;
  std::size_t edge = 0;
};

/// Finite connected graph with symmetric positive conductances, a point
/// embedding in R^d, and a distinguished root. Immutable after construction;
/// the constructor validates every structural invariant and throws
/// walklab::Error on the first defect found.
class WeightedGraph {
 public:
  struct Parts {
    std::size_t dim = 0;
    std::vector<double> coords;        // row-major, num_vertices x dim
    std::vector<RationalPoint> exact;  // optional exact coordinates
    std::vector<Edge> edges;
    std::vector<CellTag> cell_tags;    // optional, parallel to edges
    VertexId root = 0;
    std::size_t num_vertices = 0;
  };

  WeightedGraph() = default;
  explicit WeightedGraph(Parts parts);

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  VertexId root() const noexcept { return root_; }

  std::span<const double> coord(VertexId v) const {
    return {coords_.data() + v * dim_, dim_};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }
  bool has_exact_coords() const noexcept { return !exact_.empty(); }
  const RationalPoint& exact_coord(VertexId v) const { return exact_.at(v); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_cell_tags() const noexcept { return !cell_tags_.empty(); }
  const std::vector<CellTag>& cell_tags() const noexcept { return cell_tags_; }

  std::span<const Neighbor> neighbors(VertexId v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  // mu_x: sum of incident conductances.
  double vertex_weight(VertexId v) const { return vertex_weight_[v]; }

  // Same topology and embedding, new conductances (one per edge, same order).
  WeightedGraph with_weights(std::span<const double> weights) const;
  // Same graph, different root.
  WeightedGraph with_root(VertexId root) const;

  Parts parts() const;

 private:
  std::size_t dim_ = 0;
  std::size_t num_vertices_ = 0;
  VertexId root_ = 0;
  std::vector<double> coords_;
  std::vector<RationalPoint> exact_;
  std::vector<Edge> edges_;
  std::vector<CellTag> cell_tags_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<double> vertex_weight_;
};

struct MeasureTable {
  std::vector<double> mass;

  double total() const;
  double operator[](VertexId v) const { return mass[v]; }
};

// nu({x}) = mu_x for every vertex.
MeasureTable node_measure(const WeightedGraph& g);

inline constexpr std::size_t kUnreachable = static_cast<std::size_t>(-1);

/// Hop distances from `source` to every vertex (weights ignored).
std::vector<std::size_t> hop_distances(const WeightedGraph& g, VertexId source);

std::size_t hop_metric(const WeightedGraph& g, VertexId x, VertexId y);

/// Open ball {y : d_G(x, y) < r}, sorted by vertex id.
std::vector<VertexId> hop_ball(const WeightedGraph& g, VertexId x, double r);

/// Vertex minimising Euclidean distance to p. Ties go to the
/// lexicographically smallest coordinate vector, then the smallest id.
VertexId nearest_vertex(const WeightedGraph& g, std::span<const double> p);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace walklab
