#include "walklab/lattice.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "walklab/error.hpp"
#include "walklab/rng.hpp"

namespace walklab {

WeightedGraph build_lattice_box(std::size_t d, std::size_t H) {
  require(d >= 1 && H >= 1, ErrorKind::InvalidArgument, "lattice box needs d >= 1 and H >= 1");
  const std::size_t side = 2 * H + 1;
  const double total = std::pow(static_cast<double>(side), static_cast<double>(d));
  require(total <= 2e7, ErrorKind::Capacity, "lattice box too large (limit 2e7 vertices)");
  const auto n = static_cast<std::size_t>(total);
  WeightedGraph::Parts p;
  p.dim = d;
  p.num_vertices = n;
  p.coords.resize(n * d);
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t i = 1; i < d; ++i) stride[i] = stride[i - 1] * side;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t r = v;
    for (std::size_t i = 0; i < d; ++i) {
      const std::size_t k = r % side;
      r /= side;
      p.coords[v * d + i] = static_cast<double>(k) - static_cast<double>(H);
      if (k + 1 < side) p.edges.push_back({v, v + stride[i], 1.0});
    }
  }
  std::size_t root = 0;
  for (std::size_t i = 0; i < d; ++i) root += H * stride[i];
  p.root = root;
  return WeightedGraph(std::move(p));
}

WeightedGraph graph_from_edges(std::size_t n, const std::vector<Edge>& edges, VertexId root) {
  WeightedGraph::Parts p;
  p.num_vertices = n;
  p.dim = 1;
  for (std::size_t v = 0; v < n; ++v) p.coords.push_back(static_cast<double>(v));
  p.edges = edges;
  p.root = root;
  return WeightedGraph(std::move(p));
}

WeightedGraph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t v = 0; v + 1 < n; ++v) e.push_back({v, v + 1, 1.0});
  return graph_from_edges(n, e);
}

WeightedGraph cycle_graph(std::size_t n) {
  require(n >= 3, ErrorKind::InvalidArgument, "cycle needs n >= 3");
  WeightedGraph::Parts p;
  p.num_vertices = n;
  p.dim = 2;
  for (std::size_t v = 0; v < n; ++v) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(v) / static_cast<double>(n);
    p.coords.push_back(std::cos(a));
    p.coords.push_back(std::sin(a));
    p.edges.push_back({v, (v + 1) % n, 1.0});
  }
  return WeightedGraph(std::move(p));
}

WeightedGraph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) e.push_back({u, v, 1.0});
  }
  return graph_from_edges(n, e);
}

WeightedGraph random_weighted_graph(std::size_t n, std::size_t extra, std::uint64_t seed,
                                    double a, double b) {
  require(n >= 2, ErrorKind::InvalidArgument, "random graph needs n >= 2");
  CounterRng rng(seed, 0x6a09e667ULL);
  std::vector<Edge> e;
  std::set<std::pair<VertexId, VertexId>> seen;
  for (std::size_t v = 1; v < n; ++v) {
    const VertexId u = rng.below(v);
    e.push_back({u, v, rng.uniform(a, b)});
    seen.insert({u, v});
  }
  const std::size_t max_edges = n * (n - 1) / 2;
  for (std::size_t k = 0; k < extra && seen.size() < max_edges;) {
    VertexId u = rng.below(n);
    VertexId v = rng.below(n);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) continue;
    e.push_back({u, v, rng.uniform(a, b)});
    ++k;
  }
  return graph_from_edges(n, e);
}

}  // namespace walklab
