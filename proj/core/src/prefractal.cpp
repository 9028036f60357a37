#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "walklab/error.hpp"
#include "walklab/ifs.hpp"

namespace walklab {

namespace {

// Float point identification: bucket by rounded coordinates and compare
// against the neighbouring buckets with tolerance 1e-9 (unit-scale coords).
class FloatPointIndex {
 public:
  explicit FloatPointIndex(std::size_t dim) : dim_(dim) {}

  // Returns (id, inserted).
  std::pair<std::size_t, bool> insert(const std::vector<double>& p) {
    const auto base = bucket(p);
    std::vector<long long> probe(dim_);
    const std::size_t combos = static_cast<std::size_t>(std::pow(3, dim_));
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t r = c;
      for (std::size_t i = 0; i < dim_; ++i) {
        probe[i] = base[i] + static_cast<long long>(r % 3) - 1;
        r /= 3;
      }
      const auto it = buckets_.find(probe);
      if (it == buckets_.end()) continue;
      for (std::size_t id : it->second) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) d2 += (points_[id][i] - p[i]) * (points_[id][i] - p[i]);
        if (d2 <= 1e-18) return {id, false};
      }
    }
    points_.push_back(p);
    buckets_[base].push_back(points_.size() - 1);
    return {points_.size() - 1, true};
  }

 private:
  std::vector<long long> bucket(const std::vector<double>& p) const {
    std::vector<long long> b(dim_);
    for (std::size_t i = 0; i < dim_; ++i) b[i] = static_cast<long long>(std::floor(p[i] * 1e7));
    return b;
  }

  std::size_t dim_;
  std::vector<std::vector<double>> points_;
  std::map<std::vector<long long>, std::vector<std::size_t>> buckets_;
};

template <typename Point, typename Apply>
std::vector<std::vector<Point>> level_cells(const std::vector<Point>& v0, std::size_t nmaps,
                                            std::size_t level, Apply apply) {
  std::vector<std::vector<Point>> cells{v0};
  for (std::size_t l = 0; l < level; ++l) {
    std::vector<std::vector<Point>> next;
    next.reserve(cells.size() * nmaps);
    for (std::size_t i = 0; i < nmaps; ++i) {
      for (const auto& cell : cells) {
        std::vector<Point> img;
        img.reserve(cell.size());
        for (const auto& p : cell) img.push_back(apply(i, p));
        next.push_back(std::move(img));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

}  // namespace

Prefractal build_prefractal_cells(const IfsSpec& ifs, std::size_t level) {
  const std::size_t d = ifs.dim;
  const std::size_t m = ifs.v0.size();
  require(level <= 40 && std::pow(static_cast<double>(ifs.N()), static_cast<double>(level)) <= 4e6,
          ErrorKind::Capacity, "prefractal level too large (limit 4e6 cells)");
  Prefractal out;
  WeightedGraph::Parts parts;
  parts.dim = d;
  const double scale = std::pow(ifs.L, static_cast<double>(level));

  if (ifs.exact) {
    const auto Lint = static_cast<std::int64_t>(ifs.L);
    const Rational inv(1, Lint);
    auto apply = [&](std::size_t i, const RationalPoint& x) {
      const auto& map = ifs.exact_maps[i];
      RationalPoint y(d, Rational(0));
      for (std::size_t r = 0; r < d; ++r) {
        Rational s(0);
        for (std::size_t c = 0; c < d; ++c) s += map.linear[r * d + c] * x[c];
        y[r] = s * inv + map.shift[r];
      }
      return y;
    };
    const auto cells = level_cells(ifs.exact_v0, ifs.N(), level, apply);
    std::int64_t s = 1;
    for (std::size_t l = 0; l < level; ++l) s *= Lint;
    std::map<RationalPoint, VertexId> index;
    out.cells.reserve(cells.size());
    for (const auto& cell : cells) {
      std::vector<VertexId> ids;
      for (RationalPoint p : cell) {
        for (auto& x : p) x *= s;
        const auto [it, inserted] = index.emplace(p, parts.exact.size());
        if (inserted) {
          std::vector<double> fp;
          for (const auto& x : p) fp.push_back(boost::rational_cast<double>(x));
          const auto e = embed_point(ifs, fp);
          parts.coords.insert(parts.coords.end(), e.begin(), e.end());
          parts.exact.push_back(p);
        }
        ids.push_back(it->second);
      }
      out.cells.push_back(std::move(ids));
    }
    for (const auto& p : ifs.exact_v0) {
      RationalPoint q = p;
      for (auto& x : q) x *= s;
      const auto it = index.find(q);
      require(it != index.end(), ErrorKind::GeneratorDefect,
              "V_0 point is not a level-n vertex (not a fixed point of the IFS)");
      out.boundary.push_back(it->second);
    }
    parts.num_vertices = parts.exact.size();
  } else {
    auto apply = [&](std::size_t i, const std::vector<double>& x) {
      const auto& map = ifs.maps[i];
      std::vector<double> y(d, 0.0);
      for (std::size_t r = 0; r < d; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < d; ++c) acc += map.linear[r * d + c] * x[c];
        y[r] = acc / ifs.L + map.shift[r];
      }
      return y;
    };
    const auto cells = level_cells(ifs.v0, ifs.N(), level, apply);
    FloatPointIndex index(d);
    for (const auto& cell : cells) {
      std::vector<VertexId> ids;
      for (const auto& p : cell) {
        const auto [id, inserted] = index.insert(p);
        if (inserted) {
          std::vector<double> sp(p);
          for (auto& x : sp) x *= scale;
          const auto e = embed_point(ifs, sp);
          parts.coords.insert(parts.coords.end(), e.begin(), e.end());
        }
        ids.push_back(id);
      }
      out.cells.push_back(std::move(ids));
    }
    for (const auto& p : ifs.v0) {
      const auto [id, inserted] = index.insert(p);
      require(!inserted, ErrorKind::GeneratorDefect,
              "V_0 point is not a level-n vertex (not a fixed point of the IFS)");
      out.boundary.push_back(id);
    }
    parts.num_vertices = parts.coords.size() / d;
  }

  const auto pairs = v0_pairs(m);
  std::set<std::pair<VertexId, VertexId>> seen;
  for (std::size_t w = 0; w < out.cells.size(); ++w) {
    const auto& ids = out.cells[w];
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const VertexId a = ids[pairs[k].first];
      const VertexId b = ids[pairs[k].second];
      require(a != b, ErrorKind::GeneratorDefect, "two V_0 images coincide inside one cell");
      require(seen.insert(std::minmax(a, b)).second, ErrorKind::GeneratorDefect,
              "two cells share an edge; the IFS is not finitely ramified");
      parts.edges.push_back({a, b, 1.0});
      parts.cell_tags.push_back({static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(k)});
    }
  }
  parts.root = out.cells.front().front();
  out.graph = WeightedGraph(std::move(parts));
  return out;
}

WeightedGraph build_prefractal(const IfsSpec& ifs, std::size_t level) {
  return build_prefractal_cells(ifs, level).graph;
}

OrderedTree build_vicsek_adjacency_tree(const IfsSpec& ifs, std::size_t level) {
  const Prefractal pf = build_prefractal_cells(ifs, level);
  const std::size_t nc = pf.cells.size();
  std::vector<std::vector<std::size_t>> at_vertex(pf.graph.num_vertices());
  for (std::size_t w = 0; w < nc; ++w) {
    for (VertexId v : pf.cells[w]) at_vertex[v].push_back(w);
  }
  std::set<std::pair<std::size_t, std::size_t>> adj;
  for (const auto& ws : at_vertex) {
    for (std::size_t a = 0; a < ws.size(); ++a) {
      for (std::size_t b = a + 1; b < ws.size(); ++b) adj.insert(std::minmax(ws[a], ws[b]));
    }
  }
  // Union-find cycle detection.
  std::vector<std::size_t> uf(nc);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::vector<std::vector<std::size_t>> nbrs(nc);
  for (const auto& [a, b] : adj) {
    const auto ra = find(a);
    const auto rb = find(b);
    if (ra == rb) fail(ErrorKind::NotTreeLike, "cell adjacency graph: cycle detected");
    uf[ra] = rb;
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  require(ifs.v0.size() == 4, ErrorKind::InvalidArgument,
          "tree-like construction assumes |V_0| = 4");
  // Re-root at word 0 and number cells in BFS order; children sorted by word.
  std::vector<std::size_t> order{0};
  std::vector<std::size_t> label(nc, kNoParent);
  std::vector<std::size_t> parent_word(nc, kNoParent);
  label[0] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t w = order[k];
    for (std::size_t u : nbrs[w]) {
      if (label[u] == kNoParent) {
        label[u] = order.size();
        parent_word[u] = w;
        order.push_back(u);
      }
    }
  }
  require(order.size() == nc, ErrorKind::NotTreeLike, "cell adjacency graph is disconnected");
  std::vector<std::size_t> parent(nc, kNoParent);
  for (std::size_t w = 1; w < nc; ++w) parent[label[order[w]]] = label[parent_word[order[w]]];
  return OrderedTree::from_parents(parent);
}

}  // namespace walklab
