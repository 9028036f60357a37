#include "walklab/tree.hpp"

#include <algorithm>
#include <cmath>

#include "walklab/error.hpp"
#include "walklab/rng.hpp"

namespace walklab {

OrderedTree OrderedTree::from_parents(const std::vector<std::size_t>& parent) {
  OrderedTree t;
  t.parent = parent;
  t.children.assign(parent.size(), {});
  require(!parent.empty() && parent[0] == kNoParent, ErrorKind::InvalidArgument,
          "vertex 0 must be the root");
  for (std::size_t v = 1; v < parent.size(); ++v) {
    require(parent[v] < parent.size() && parent[v] != v, ErrorKind::InvalidArgument,
            "bad parent for vertex " + std::to_string(v));
    t.children[parent[v]].push_back(v);
  }
  // Every vertex must reach the root.
  for (std::size_t v = 1; v < parent.size(); ++v) {
    std::size_t u = v;
    std::size_t steps = 0;
    while (u != 0) {
      u = parent[u];
      require(++steps <= parent.size(), ErrorKind::InvalidArgument, "parent map has a cycle");
    }
  }
  return t;
}

bool operator==(const OrderedTree& a, const OrderedTree& b) {
  return a.parent == b.parent && a.children == b.children;
}

std::vector<std::size_t> contour_vertices(const OrderedTree& t) {
  std::vector<std::size_t> out{0};
  if (t.size() == 0) return out;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  out.push_back(0);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < t.children[v].size()) {
      const std::size_t c = t.children[v][next++];
      out.push_back(c);
      stack.push_back({c, 0});
    } else {
      stack.pop_back();
      if (!stack.empty()) out.push_back(stack.back().first);
    }
  }
  out.push_back(0);
  return out;
}

std::vector<std::size_t> depths(const OrderedTree& t) {
  std::vector<std::size_t> d(t.size(), 0);
  // Parents do not necessarily precede children, so walk up.
  for (std::size_t v = 0; v < t.size(); ++v) {
    std::size_t u = v;
    while (t.parent[u] != kNoParent) {
      u = t.parent[u];
      ++d[v];
    }
  }
  return d;
}

Excursion excursion_from_tree(const OrderedTree& t) {
  require(t.size() >= 1, ErrorKind::InvalidArgument, "empty tree");
  const auto d = depths(t);
  Excursion e;
  for (std::size_t v : contour_vertices(t)) e.samples.push_back(static_cast<double>(d[v]));
  return e;
}

std::vector<std::size_t> first_visit_index(const OrderedTree& t) {
  std::vector<std::size_t> first(t.size(), kNoParent);
  const auto cv = contour_vertices(t);
  for (std::size_t i = 0; i < cv.size(); ++i) {
    if (first[cv[i]] == kNoParent) first[cv[i]] = i;
  }
  return first;
}

OrderedTree tree_from_excursion(const Excursion& e) {
  const auto& w = e.samples;
  require(w.size() >= 3 && w.size() % 2 == 1, ErrorKind::MalformedExcursion,
          "excursion needs 2n+1 samples");
  const std::size_t last = w.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    require(w[i] >= 0.0, ErrorKind::MalformedExcursion,
            "negative sample at index " + std::to_string(i));
    require(w[i] == std::floor(w[i]), ErrorKind::MalformedExcursion,
            "non-integer sample at index " + std::to_string(i));
  }
  require(w[0] == 0.0 && w[1] == 0.0 && w[last - 1] == 0.0 && w[last] == 0.0,
          ErrorKind::MalformedExcursion, "excursion must start and end at the root");
  std::vector<std::size_t> parent{kNoParent};
  std::vector<std::size_t> stack{0};
  for (std::size_t i = 2; i < last; ++i) {
    const double step = w[i] - w[i - 1];
    if (step == 1.0) {
      parent.push_back(stack.back());
      stack.push_back(parent.size() - 1);
    } else if (step == -1.0) {
      stack.pop_back();
    } else {
      fail(ErrorKind::MalformedExcursion, "non-unit step at index " + std::to_string(i));
    }
  }
  require(2 * parent.size() + 1 == w.size(), ErrorKind::MalformedExcursion,
          "excursion length does not match the number of vertices");
  return OrderedTree::from_parents(parent);
}

std::size_t tree_distance(const OrderedTree& t, std::size_t u, std::size_t v) {
  const auto d = depths(t);
  std::size_t dist = 0;
  while (u != v) {
    if (d[u] >= d[v]) {
      u = t.parent[u];
    } else {
      v = t.parent[v];
    }
    ++dist;
  }
  return dist;
}

double excursion_distance(const Excursion& e, std::size_t s, std::size_t t) {
  if (s > t) std::swap(s, t);
  const auto& w = e.samples;
  const double m = *std::min_element(w.begin() + static_cast<std::ptrdiff_t>(s),
                                     w.begin() + static_cast<std::ptrdiff_t>(t) + 1);
  return w[s] + w[t] - 2.0 * m;
}

OrderedTree sample_uniform_tree(std::size_t n, std::uint64_t seed) {
  require(n >= 2, ErrorKind::InvalidArgument, "uniform tree needs n >= 2");
  CounterRng rng(seed, n);
  // n-1 up steps (+1) and n down steps (-1); exactly one rotation starting
  // right after the first minimum of the partial sums stays >= 0 until the
  // final -1.
  std::vector<int> steps(2 * n - 1, -1);
  std::fill(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(n - 1), 1);
  for (std::size_t i = steps.size() - 1; i > 0; --i) {
    std::swap(steps[i], steps[rng.below(i + 1)]);
  }
  int sum = 0;
  int best = 0;
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    sum += steps[i];
    if (sum < best) {
      best = sum;
      argmin = i + 1;
    }
  }
  std::rotate(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(argmin % steps.size()),
              steps.end());
  std::vector<std::size_t> parent{kNoParent};
  std::vector<std::size_t> stack{0};
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    if (steps[i] == 1) {
      parent.push_back(stack.back());
      stack.push_back(parent.size() - 1);
    } else {
      stack.pop_back();
    }
  }
  return OrderedTree::from_parents(parent);
}

WeightedGraph tree_to_graph(const OrderedTree& t) {
  require(t.size() >= 2, ErrorKind::InvalidArgument, "tree graph needs at least 2 vertices");
  WeightedGraph::Parts p;
  p.num_vertices = t.size();
  p.dim = 1;
  const auto first = first_visit_index(t);
  p.coords.resize(t.size());
  for (std::size_t v = 0; v < t.size(); ++v) p.coords[v] = static_cast<double>(first[v]);
  for (std::size_t v = 1; v < t.size(); ++v) p.edges.push_back({t.parent[v], v, 1.0});
  p.root = 0;
  return WeightedGraph(std::move(p));
}

}  // namespace walklab
