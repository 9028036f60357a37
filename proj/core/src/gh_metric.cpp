#include "walklab/gh_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "walklab/error.hpp"
#include "walklab/kernels.hpp"
#include "walklab/parallel.hpp"
#include "walklab/rng.hpp"

namespace walklab {

void validate_space(const PointedKernelSpace& s) {
  const std::size_t n = s.size;
  require(n >= 1, ErrorKind::InvalidArgument, "space needs at least one point");
  require(s.metric.size() == n * n, ErrorKind::InvalidArgument, "metric must be size x size");
  require(s.root < n, ErrorKind::InvalidArgument, "root is not a point");
  require(!s.t_grid.empty(), ErrorKind::InvalidArgument, "t_grid is empty");
  require(std::is_sorted(s.t_grid.begin(), s.t_grid.end()), ErrorKind::InvalidArgument,
          "t_grid must be increasing");
  require(s.curves.size() == n, ErrorKind::InvalidArgument, "one curve per point required");
  for (const auto& c : s.curves) {
    require(c.size() == s.t_grid.size(), ErrorKind::InvalidArgument,
            "curve length does not match t_grid");
  }
  for (std::size_t x = 0; x < n; ++x) {
    require(s.d(x, x) == 0.0, ErrorKind::InvalidArgument, "metric diagonal must be zero");
    for (std::size_t y = 0; y < n; ++y) {
      require(std::isfinite(s.d(x, y)) && s.d(x, y) >= 0.0, ErrorKind::InvalidArgument,
              "metric entries must be finite and nonnegative");
      require(s.d(x, y) == s.d(y, x), ErrorKind::InvalidArgument, "metric is not symmetric");
      for (std::size_t z = 0; z < n; ++z) {
        require(s.d(x, z) <= s.d(x, y) + s.d(y, z) + 1e-9, ErrorKind::InvalidArgument,
                "metric violates the triangle inequality");
      }
    }
  }
}

nlohmann::json space_to_json(const PointedKernelSpace& s) {
  nlohmann::json metric = nlohmann::json::array();
  for (std::size_t x = 0; x < s.size; ++x) {
    metric.push_back(std::vector<double>(s.metric.begin() + static_cast<std::ptrdiff_t>(x * s.size),
                                         s.metric.begin() + static_cast<std::ptrdiff_t>((x + 1) * s.size)));
  }
  return {{"points", s.size}, {"metric", metric}, {"root", s.root},
          {"t_grid", s.t_grid}, {"curves", s.curves}};
}

PointedKernelSpace space_from_json(const nlohmann::json& j) {
  PointedKernelSpace s;
  try {
    const auto& pts = j.at("points");
    s.size = pts.is_array() ? pts.size() : pts.get<std::size_t>();
    for (const auto& row : j.at("metric")) {
      require(row.size() == s.size, ErrorKind::InvalidArgument, "metric row has wrong length");
      for (const auto& v : row) s.metric.push_back(v.get<double>());
    }
    s.root = j.at("root").get<std::size_t>();
    s.t_grid = j.at("t_grid").get<std::vector<double>>();
    s.curves = j.at("curves").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed kernel space: ") + e.what());
  }
  validate_space(s);
  return s;
}

PointedKernelSpace kernel_space_from_graph(const WeightedGraph& g, const ScalingTriple& s,
                                           const std::vector<double>& t_grid) {
  const std::size_t n = g.num_vertices();
  require(n <= 4000, ErrorKind::Capacity, "kernel space limited to 4000 points");
  PointedKernelSpace k;
  k.size = n;
  k.root = g.root();
  k.t_grid = t_grid;
  k.metric.resize(n * n);
  for (VertexId x = 0; x < n; ++x) {
    const auto dist = hop_distances(g, x);
    for (VertexId y = 0; y < n; ++y) k.metric[x * n + y] = static_cast<double>(dist[y]) / s.alpha;
  }
  std::vector<std::size_t> steps;
  for (double t : t_grid) steps.push_back(static_cast<std::size_t>(std::floor(s.gamma * t)));
  const auto rows = smoothed_rows_at(g, g.root(), steps);
  k.curves.assign(n, std::vector<double>(t_grid.size()));
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    for (VertexId x = 0; x < n; ++x) k.curves[x][i] = s.beta * rows[i][x];
  }
  return k;
}

bool is_correspondence(const PointedKernelSpace& a, const PointedKernelSpace& b,
                       const Correspondence& c) {
  std::vector<bool> ca(a.size, false), cb(b.size, false);
  bool root = false;
  for (const auto& [x, y] : c) {
    if (x >= a.size || y >= b.size) return false;
    ca[x] = cb[y] = true;
    root = root || (x == a.root && y == b.root);
  }
  return root && std::all_of(ca.begin(), ca.end(), [](bool v) { return v; }) &&
         std::all_of(cb.begin(), cb.end(), [](bool v) { return v; });
}

double distortion(const PointedKernelSpace& a, const PointedKernelSpace& b, const Correspondence& c) {
  double worst = 0.0;
  for (const auto& [x1, y1] : c) {
    for (const auto& [x2, y2] : c) worst = std::max(worst, std::abs(a.d(x1, x2) - b.d(y1, y2)));
  }
  return worst;
}

namespace {

double curve_gap(const PointedKernelSpace& a, const PointedKernelSpace& b, std::size_t x,
                 std::size_t y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.t_grid.size(); ++i) {
    worst = std::max(worst, std::abs(a.curves[x][i] - b.curves[y][i]));
  }
  return worst;
}

}  // namespace

double kernel_mismatch(const PointedKernelSpace& a, const PointedKernelSpace& b,
                       const Correspondence& c) {
  require(a.t_grid == b.t_grid, ErrorKind::InvalidArgument, "spaces use different t-grids");
  double worst = 0.0;
  for (const auto& [x, y] : c) worst = std::max(worst, curve_gap(a, b, x, y));
  return worst;
}

double delta_of(const PointedKernelSpace& a, const PointedKernelSpace& b, const Correspondence& c) {
  require(is_correspondence(a, b, c), ErrorKind::InvalidArgument,
          "not a root-respecting correspondence");
  return distortion(a, b, c) + kernel_mismatch(a, b, c);
}

DeltaMode delta_mode_from_string(const std::string& s) {
  if (s == "exact") return DeltaMode::exact;
  if (s == "heuristic") return DeltaMode::heuristic;
  fail(ErrorKind::InvalidArgument, "unknown delta mode '" + s + "'");
}

namespace {

class Problem {
 public:
  Problem(const PointedKernelSpace& a, const PointedKernelSpace& b) : a_(a), b_(b) {
    gap_.resize(a.size * b.size);
    for (std::size_t x = 0; x < a.size; ++x) {
      for (std::size_t y = 0; y < b.size; ++y) gap_[x * b.size + y] = curve_gap(a, b, x, y);
    }
  }

  double gap(std::size_t x, std::size_t y) const { return gap_[x * b_.size + y]; }
  double mismatch(std::size_t x1, std::size_t y1, std::size_t x2, std::size_t y2) const {
    return std::abs(a_.d(x1, x2) - b_.d(y1, y2));
  }

  // f: a -> b, g: b -> a.
  Correspondence pairs(const std::vector<std::size_t>& f, const std::vector<std::size_t>& g) const {
    Correspondence c;
    for (std::size_t x = 0; x < f.size(); ++x) c.emplace_back(x, f[x]);
    for (std::size_t y = 0; y < g.size(); ++y) c.emplace_back(g[y], y);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
  }

  // (delta, tie-break sum) of a pair list.
  std::pair<double, double> score(const Correspondence& c) const {
    double dis = 0.0, ker = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      ker = std::max(ker, gap(c[i].first, c[i].second));
      sum += gap(c[i].first, c[i].second);
      for (std::size_t j = i + 1; j < c.size(); ++j) {
        const double m = mismatch(c[i].first, c[i].second, c[j].first, c[j].second);
        dis = std::max(dis, m);
        sum += m;
      }
    }
    return {dis + ker, sum};
  }

  const PointedKernelSpace& a() const { return a_; }
  const PointedKernelSpace& b() const { return b_; }

 private:
  const PointedKernelSpace& a_;
  const PointedKernelSpace& b_;
  std::vector<double> gap_;
};

bool better(std::pair<double, double> lhs, std::pair<double, double> rhs) {
  const double tol = 1e-12 * std::max(1.0, std::abs(rhs.first));
  if (lhs.first < rhs.first - tol) return true;
  if (lhs.first > rhs.first + tol) return false;
  return lhs.second < rhs.second - 1e-12 * std::max(1.0, std::abs(rhs.second));
}

// 1-move and 2-swap descent on both maps, lexicographic on (delta, sum).
std::pair<double, double> local_search(const Problem& p, std::vector<std::size_t>& f,
                                       std::vector<std::size_t>& g) {
  const auto& a = p.a();
  const auto& b = p.b();
  auto best = p.score(p.pairs(f, g));
  bool improved = true;
  while (improved) {
    improved = false;
    auto attempt = [&]() {
      const auto sc = p.score(p.pairs(f, g));
      if (better(sc, best)) {
        best = sc;
        improved = true;
        return true;
      }
      return false;
    };
    for (int side = 0; side < 2; ++side) {
      auto& map = side == 0 ? f : g;
      const std::size_t fixed = side == 0 ? a.root : b.root;
      const std::size_t range = side == 0 ? b.size : a.size;
      for (std::size_t u = 0; u < map.size(); ++u) {
        if (u == fixed) continue;
        for (std::size_t v = 0; v < range; ++v) {
          const std::size_t old = map[u];
          if (v == old) continue;
          map[u] = v;
          if (!attempt()) map[u] = old;
        }
      }
      for (std::size_t u = 0; u < map.size(); ++u) {
        for (std::size_t w = u + 1; w < map.size(); ++w) {
          if (u == fixed || w == fixed || map[u] == map[w]) continue;
          std::swap(map[u], map[w]);
          if (!attempt()) std::swap(map[u], map[w]);
        }
      }
    }
  }
  return best;
}

DeltaResult heuristic_delta(const Problem& p) {
  const auto& a = p.a();
  const auto& b = p.b();
  std::vector<std::size_t> f(a.size, b.root), g(b.size, a.root);

  // Greedy: points in order of distance from the root pick the partner that
  // adds the least to the current pair list.
  Correspondence cur{{a.root, b.root}};
  auto greedy_side = [&](bool side_a) {
    const auto& s = side_a ? a : b;
    std::vector<std::size_t> order(s.size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
      return s.d(s.root, u) < s.d(s.root, v);
    });
    for (std::size_t u : order) {
      if (u == s.root) continue;
      const std::size_t other = side_a ? b.size : a.size;
      std::pair<double, double> best{std::numeric_limits<double>::infinity(), 0.0};
      std::size_t pick = 0;
      for (std::size_t v = 0; v < other; ++v) {
        auto trial = cur;
        trial.emplace_back(side_a ? u : v, side_a ? v : u);
        const auto sc = p.score(trial);
        if (better(sc, best)) {
          best = sc;
          pick = v;
        }
      }
      cur.emplace_back(side_a ? u : pick, side_a ? pick : u);
      (side_a ? f[u] : g[u]) = pick;
    }
  };
  greedy_side(true);
  greedy_side(false);

  auto best = local_search(p, f, g);
  // Restarts from random maps; the objective is a max, so plain descent
  // stalls on plateaus.
  const std::size_t restarts = a.size * b.size <= 64 ? 24 : 2;
  CounterRng rng(mix64(a.size * 1000003 + b.size), 0x11);
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<std::size_t> f2(a.size), g2(b.size);
    for (std::size_t x = 0; x < a.size; ++x) f2[x] = x == a.root ? b.root : rng.below(b.size);
    for (std::size_t y = 0; y < b.size; ++y) g2[y] = y == b.root ? a.root : rng.below(a.size);
    const auto sc = local_search(p, f2, g2);
    if (better(sc, best)) {
      best = sc;
      f = std::move(f2);
      g = std::move(g2);
    }
  }
  DeltaResult r;
  r.witness = p.pairs(f, g);
  r.value = p.score(r.witness).first;
  return r;
}

class ExactSearch {
 public:
  ExactSearch(const Problem& p, DeltaResult start) : p_(p), best_(std::move(start)) {
    for (std::size_t x = 0; x < p.a().size; ++x) {
      if (x != p.a().root) slots_.push_back({true, x});
    }
    for (std::size_t y = 0; y < p.b().size; ++y) {
      if (y != p.b().root) slots_.push_back({false, y});
    }
    chosen_.emplace_back(p.a().root, p.b().root);
  }

  DeltaResult run() {
    recurse(0, 0.0, p_.gap(p_.a().root, p_.b().root));
    std::sort(best_.witness.begin(), best_.witness.end());
    best_.witness.erase(std::unique(best_.witness.begin(), best_.witness.end()),
                        best_.witness.end());
    return best_;
  }

 private:
  struct Slot {
    bool side_a;
    std::size_t point;
  };

  void recurse(std::size_t k, double dis, double ker) {
    if (dis + ker >= best_.value) return;
    if (k == slots_.size()) {
      best_.value = dis + ker;
      best_.witness = chosen_;
      return;
    }
    const Slot s = slots_[k];
    const std::size_t range = s.side_a ? p_.b().size : p_.a().size;
    std::vector<std::pair<double, std::size_t>> options;
    std::vector<std::pair<double, double>> parts(range);
    for (std::size_t v = 0; v < range; ++v) {
      const std::size_t x = s.side_a ? s.point : v;
      const std::size_t y = s.side_a ? v : s.point;
      double d2 = dis;
      for (const auto& [cx, cy] : chosen_) d2 = std::max(d2, p_.mismatch(x, y, cx, cy));
      const double k2 = std::max(ker, p_.gap(x, y));
      parts[v] = {d2, k2};
      options.emplace_back(d2 + k2, v);
    }
    std::sort(options.begin(), options.end());
    for (const auto& [lb, v] : options) {
      if (lb >= best_.value) break;
      chosen_.emplace_back(s.side_a ? s.point : v, s.side_a ? v : s.point);
      recurse(k + 1, parts[v].first, parts[v].second);
      chosen_.pop_back();
    }
  }

  const Problem& p_;
  DeltaResult best_;
  std::vector<Slot> slots_;
  Correspondence chosen_;
};

}  // namespace

DeltaResult delta_distance(const PointedKernelSpace& a, const PointedKernelSpace& b,
                           DeltaMode mode) {
  require(a.t_grid == b.t_grid, ErrorKind::InvalidArgument, "spaces use different t-grids");
  if (mode == DeltaMode::exact) {
    require(a.size * b.size <= kExactDeltaCap, ErrorKind::Capacity,
            "exact delta limited to |a||b| <= " + std::to_string(kExactDeltaCap) + ", got " +
                std::to_string(a.size * b.size));
  }
  const Problem p(a, b);
  DeltaResult r = heuristic_delta(p);
  if (mode == DeltaMode::heuristic) return r;
  return ExactSearch(p, std::move(r)).run();
}

PointedKernelSpace random_space(std::size_t points, std::size_t grid, std::uint64_t seed) {
  require(points >= 1 && grid >= 1, ErrorKind::InvalidArgument, "need points and grid >= 1");
  CounterRng rng(seed, 0x6d);
  PointedKernelSpace s;
  s.size = points;
  std::vector<double> xy(2 * points);
  for (double& v : xy) v = rng.uniform();
  s.metric.resize(points * points);
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = 0; j < points; ++j) {
      s.metric[i * points + j] = std::hypot(xy[2 * i] - xy[2 * j], xy[2 * i + 1] - xy[2 * j + 1]);
    }
  }
  s.root = static_cast<std::size_t>(rng.below(points));
  for (std::size_t i = 0; i < grid; ++i) s.t_grid.push_back(1.0 + static_cast<double>(i));
  s.curves.assign(points, std::vector<double>(grid));
  for (auto& c : s.curves) {
    for (double& v : c) v = rng.uniform();
  }
  return s;
}

PointedKernelSpace permute_space(const PointedKernelSpace& s, const std::vector<std::size_t>& perm) {
  require(perm.size() == s.size, ErrorKind::InvalidArgument, "permutation has wrong length");
  PointedKernelSpace out = s;
  for (std::size_t i = 0; i < s.size; ++i) {
    for (std::size_t j = 0; j < s.size; ++j) out.metric[perm[i] * s.size + perm[j]] = s.d(i, j);
    out.curves[perm[i]] = s.curves[i];
  }
  out.root = perm[s.root];
  return out;
}

bool AxiomReport::ok(double tol) const {
  return max_asymmetry <= tol && max_self_distance <= tol && triangle_violations == 0 &&
         isometric_copy_failures == 0;
}

AxiomReport metric_axiom_suite(std::size_t samples, std::uint64_t seed, std::size_t workers) {
  struct One {
    double asym = 0, self = 0, excess = -std::numeric_limits<double>::infinity();
    bool copy_fail = false;
  };
  std::vector<One> res(samples);
  parallel_for(samples, workers, [&](std::size_t k) {
    CounterRng rng(seed, k);
    auto make = [&](std::uint64_t tag) {
      return random_space(1 + rng.below(5), 2, mix64(seed ^ (k * 8 + tag)));
    };
    const auto a = make(1), b = make(2), c = make(3);
    const auto D = [](const auto& u, const auto& v) {
      return delta_distance(u, v, DeltaMode::exact).value;
    };
    const double ab = D(a, b), ba = D(b, a), bc = D(b, c), ac = D(a, c);
    One& o = res[k];
    o.asym = std::abs(ab - ba);
    o.self = std::max({D(a, a), D(b, b), D(c, c)});
    o.excess = ac - ab - bc;
    std::vector<std::size_t> perm(a.size);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    o.copy_fail = D(a, permute_space(a, perm)) != 0.0;
  });
  AxiomReport r;
  r.samples = samples;
  r.worst_triangle_excess = samples ? -std::numeric_limits<double>::infinity() : 0.0;
  for (const One& o : res) {
    r.max_asymmetry = std::max(r.max_asymmetry, o.asym);
    r.max_self_distance = std::max(r.max_self_distance, o.self);
    r.worst_triangle_excess = std::max(r.worst_triangle_excess, o.excess);
    if (o.excess > 1e-9) ++r.triangle_violations;
    if (o.copy_fail) ++r.isometric_copy_failures;
  }
  return r;
}

}  // namespace walklab
