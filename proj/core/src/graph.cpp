#include "walklab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <utility>

#include "walklab/error.hpp"

namespace walklab {

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(text));
    const auto num = std::stoll(text.substr(0, slash));
    const auto den = std::stoll(text.substr(slash + 1));
    require(den != 0, ErrorKind::InvalidArgument, "zero denominator in '" + text + "'");
    return Rational(num, den);
  } catch (const std::logic_error&) {
    fail(ErrorKind::InvalidArgument, "not a rational number: '" + text + "'");
  }
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

WeightedGraph::WeightedGraph(Parts parts)
    : dim_(parts.dim),
      num_vertices_(parts.num_vertices),
      root_(parts.root),
      coords_(std::move(parts.coords)),
      exact_(std::move(parts.exact)),
      edges_(std::move(parts.edges)),
      cell_tags_(std::move(parts.cell_tags)) {
  const std::size_t n = num_vertices_;
  require(n >= 2, ErrorKind::ConstructionDefect, "graph needs at least 2 vertices");
  require(coords_.size() == n * dim_, ErrorKind::ConstructionDefect,
          "coordinate table does not match vertex count and dimension");
  require(exact_.empty() || exact_.size() == n, ErrorKind::ConstructionDefect,
          "exact coordinate table does not match vertex count");
  require(cell_tags_.empty() || cell_tags_.size() == edges_.size(),
          ErrorKind::ConstructionDefect, "cell tags must parallel the edge list");
  require(root_ < n, ErrorKind::ConstructionDefect, "root is not a vertex");

  std::set<std::pair<VertexId, VertexId>> seen;
  std::vector<std::size_t> deg(n, 0);
  for (const Edge& e : edges_) {
    require(e.u < n && e.v < n, ErrorKind::ConstructionDefect, "edge endpoint out of range");
    require(e.u != e.v, ErrorKind::ConstructionDefect,
            "self-loop at vertex " + std::to_string(e.u));
    require(std::isfinite(e.weight) && e.weight > 0.0, ErrorKind::ConstructionDefect,
            "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                "} has non-positive weight");
    const auto key = std::minmax(e.u, e.v);
    require(seen.insert(key).second, ErrorKind::ConstructionDefect,
            "duplicate edge {" + std::to_string(key.first) + "," +
                std::to_string(key.second) + "}");
    ++deg[e.u];
    ++deg[e.v];
  }
  for (VertexId v = 0; v < n; ++v) {
    require(deg[v] > 0, ErrorKind::ConstructionDefect,
            "isolated vertex " + std::to_string(v) + " has zero mass");
  }

  offsets_.assign(n + 1, 0);
  for (VertexId v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    adjacency_[fill[e.u]++] = {e.v, e.weight, i};
    adjacency_[fill[e.v]++] = {e.u, e.weight, i};
  }
  vertex_weight_.assign(n, 0.0);
  for (VertexId v = 0; v < n; ++v) {
    auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
    auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    double s = 0.0;
    for (auto it = first; it != last; ++it) s += it->weight;
    vertex_weight_[v] = s;
  }

  const auto dist = hop_distances(*this, root_);
  for (VertexId v = 0; v < n; ++v) {
    require(dist[v] != kUnreachable, ErrorKind::ConnectivityDefect,
            "vertex " + std::to_string(v) + " is not connected to the root");
  }
}

WeightedGraph WeightedGraph::with_weights(std::span<const double> weights) const {
  require(weights.size() == edges_.size(), ErrorKind::InvalidArgument,
          "weight vector size does not match edge count");
  Parts p = parts();
  for (std::size_t i = 0; i < p.edges.size(); ++i) p.edges[i].weight = weights[i];
  return WeightedGraph(std::move(p));
}

WeightedGraph WeightedGraph::with_root(VertexId root) const {
  Parts p = parts();
  p.root = root;
  return WeightedGraph(std::move(p));
}

WeightedGraph::Parts WeightedGraph::parts() const {
  Parts p;
  p.dim = dim_;
  p.coords = coords_;
  p.exact = exact_;
  p.edges = edges_;
  p.cell_tags = cell_tags_;
  p.root = root_;
  p.num_vertices = num_vertices_;
  return p;
}

double MeasureTable::total() const {
  double s = 0.0;
  for (double m : mass) s += m;
  return s;
}

MeasureTable node_measure(const WeightedGraph& g) {
  MeasureTable t;
  t.mass.resize(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    t.mass[v] = g.vertex_weight(v);
    require(t.mass[v] > 0.0, ErrorKind::ConstructionDefect,
            "vertex " + std::to_string(v) + " has zero mass");
  }
  return t;
}

std::vector<std::size_t> hop_distances(const WeightedGraph& g, VertexId source) {
  require(source < g.num_vertices(), ErrorKind::InvalidArgument, "source is not a vertex");
  std::vector<std::size_t> dist(g.num_vertices(), kUnreachable);
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : g.neighbors(v)) {
      if (dist[nb.to] == kUnreachable) {
        dist[nb.to] = dist[v] + 1;
        queue.push_back(nb.to);
      }
    }
  }
  return dist;
}

std::size_t hop_metric(const WeightedGraph& g, VertexId x, VertexId y) {
  require(y < g.num_vertices(), ErrorKind::InvalidArgument, "target is not a vertex");
  const std::size_t d = hop_distances(g, x)[y];
  require(d != kUnreachable, ErrorKind::ConnectivityDefect,
          "vertex " + std::to_string(y) + " unreachable from " + std::to_string(x));
  return d;
}

std::vector<VertexId> hop_ball(const WeightedGraph& g, VertexId x, double r) {
  const auto dist = hop_distances(g, x);
  std::vector<VertexId> ball;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (dist[v] != kUnreachable && static_cast<double>(dist[v]) < r) ball.push_back(v);
  }
  return ball;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

VertexId nearest_vertex(const WeightedGraph& g, std::span<const double> p) {
  require(g.dim() > 0, ErrorKind::InvalidArgument, "graph has no embedding");
  require(p.size() == g.dim(), ErrorKind::InvalidArgument, "point dimension mismatch");
  VertexId best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto c = g.coord(v);
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) d2 += (c[i] - p[i]) * (c[i] - p[i]);
    if (d2 < best_d2) {
      best = v;
      best_d2 = d2;
    } else if (d2 == best_d2) {
      const auto b = g.coord(best);
      if (std::lexicographical_compare(c.begin(), c.end(), b.begin(), b.end())) best = v;
    }
  }
  return best;
}

}  // namespace walklab
