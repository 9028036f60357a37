#include "walklab/llt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "walklab/error.hpp"
#include "walklab/kernels.hpp"
#include "walklab/parallel.hpp"
#include "walklab/rng.hpp"
#include "walklab/tree.hpp"

namespace walklab {

Family family_from_string(const std::string& s) {
  if (s == "lattice") return Family::lattice;
  if (s == "tree") return Family::tree;
  if (s == "nested") return Family::nested;
  if (s == "carpet") return Family::carpet;
  fail(ErrorKind::InvalidArgument, "unknown family '" + s + "'");
}

const char* to_string(Family f) {
  switch (f) {
    case Family::lattice: return "lattice";
    case Family::tree: return "tree";
    case Family::nested: return "nested";
    case Family::carpet: return "carpet";
  }
  return "unknown";
}

ScalingTriple scaling_for(Family family, double level, const ScalingParams& p) {
  require(level >= 1.0, ErrorKind::InvalidArgument, "scaling level must be >= 1");
  ScalingTriple s;
  s.family = family;
  s.level = level;
  const double n = level;
  switch (family) {
    case Family::lattice: {
      require(p.d >= 1, ErrorKind::InvalidArgument, "lattice dimension must be >= 1");
      const double d = static_cast<double>(p.d);
      s.c1 = p.c1 > 0.0 ? p.c1 : 1.0 / d;
      s.c2 = p.c2 > 0.0 ? p.c2 : 2.0 * d;
      s.alpha = std::sqrt(n);
      s.beta = s.c2 * std::pow(n, d / 2.0);
      s.gamma = n;
      s.embed_scale = s.alpha;
      break;
    }
    case Family::tree:
      s.alpha = std::sqrt(n);
      s.beta = 2.0 * n;
      s.gamma = std::pow(n, 1.5);
      s.embed_scale = s.alpha;
      break;
    case Family::nested: {
      require(p.N > 1.0 && p.L > 1.0, ErrorKind::InvalidArgument, "nested scaling needs N and L");
      require(p.lambda > 0.0, ErrorKind::InvalidArgument, "nested scaling needs lambda");
      const double a = p.alpha > 0.0 ? p.alpha : p.L;
      s.c1 = p.c1 > 0.0 ? p.c1 : 1.0;
      s.c2 = p.c2 > 0.0 ? p.c2 : 1.0;
      s.alpha = std::pow(a, n);
      s.beta = s.c1 * std::pow(p.N, n);
      s.gamma = s.c2 * std::pow(p.N * p.lambda, n);
      s.embed_scale = std::pow(p.L, n);
      break;
    }
    case Family::carpet: {
      require(p.N > 1.0 && p.L > 1.0, ErrorKind::InvalidArgument, "carpet scaling needs N and L");
      require(p.d_w > 0.0, ErrorKind::InvalidArgument, "carpet scaling needs d_w");
      s.c1 = p.c1 > 0.0 ? p.c1 : 1.0;
      s.c2 = p.c2 > 0.0 ? p.c2 : 1.0;
      s.alpha = std::pow(p.L, n);
      s.beta = s.c1 * std::pow(p.N, n);
      s.gamma = s.c2 * std::pow(p.L, p.d_w * n);
      s.embed_scale = s.alpha;
      break;
    }
  }
  return s;
}

namespace {

std::vector<std::size_t> steps_for(const ScalingTriple& s, const std::vector<double>& t_grid) {
  std::vector<std::size_t> steps;
  for (double t : t_grid) {
    require(t >= 0.0, ErrorKind::InvalidArgument, "times must be nonnegative");
    const double m = std::floor(s.gamma * t);
    require(m <= 1e8, ErrorKind::Capacity, "time horizon exceeds 1e8 steps");
    steps.push_back(static_cast<std::size_t>(m));
  }
  return steps;
}

}  // namespace

RescaledKernel rescale_kernel_vertices(const WeightedGraph& g, const ScalingTriple& s,
                                       const std::vector<double>& t_grid,
                                       const std::vector<VertexId>& vertices) {
  const auto rows = smoothed_rows_at(g, g.root(), steps_for(s, t_grid));
  RescaledKernel k;
  k.level = s.level;
  k.t_grid = t_grid;
  k.num_points = vertices.size();
  k.values.resize(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    for (VertexId v : vertices) k.values[i].push_back(s.beta * rows[i][v]);
  }
  return k;
}

RescaledKernel rescale_kernel(const WeightedGraph& g, const ScalingTriple& s,
                              const std::vector<double>& t_grid, const std::vector<double>& points) {
  const std::size_t d = g.dim();
  require(d > 0 && points.size() % d == 0, ErrorKind::InvalidArgument,
          "points must be flattened with the graph's dimension");
  std::vector<VertexId> vertices;
  std::vector<double> p(d);
  for (std::size_t i = 0; i < points.size(); i += d) {
    for (std::size_t j = 0; j < d; ++j) p[j] = s.embed_scale * points[i + j];
    vertices.push_back(nearest_vertex(g, p));
  }
  return rescale_kernel_vertices(g, s, t_grid, vertices);
}

double sup_distance(const RescaledKernel& a, const RescaledKernel& b) {
  require(a.t_grid == b.t_grid && a.num_points == b.num_points, ErrorKind::InvalidArgument,
          "rescaled kernels live on different grids");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    for (std::size_t j = 0; j < a.num_points; ++j) {
      worst = std::max(worst, std::abs(a.values[i][j] - b.values[i][j]));
    }
  }
  return worst;
}

double sup_distance(const RescaledKernel& a, const std::vector<double>& points, std::size_t dim,
                    const std::function<double(double, std::span<const double>)>& reference) {
  require(points.size() == a.num_points * dim, ErrorKind::InvalidArgument,
          "reference points do not match the kernel grid");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    for (std::size_t j = 0; j < a.num_points; ++j) {
      const double r = reference(a.t_grid[i], std::span<const double>(points.data() + j * dim, dim));
      worst = std::max(worst, std::abs(a.values[i][j] - r));
    }
  }
  return worst;
}

double gaussian_reference(std::size_t d, double c1, double t, std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::pow(2.0 * std::numbers::pi * c1 * t, -static_cast<double>(d) / 2.0) *
         std::exp(-r2 / (2.0 * c1 * t));
}

std::vector<double> geometric_grid(double a, double b, std::size_t count) {
  require(a > 0.0 && b >= a && count >= 1, ErrorKind::InvalidArgument,
          "geometric grid needs 0 < a <= b and count >= 1");
  std::vector<double> out;
  if (count == 1) return {a};
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  out.back() = b;
  return out;
}

std::vector<double> cube_grid(std::size_t d, double r, double h) {
  require(h > 0.0 && r >= 0.0, ErrorKind::InvalidArgument, "grid needs h > 0 and r >= 0");
  const auto k = static_cast<std::size_t>(std::llround(2.0 * r / h));
  std::vector<double> axis;
  for (std::size_t i = 0; i <= k; ++i) axis.push_back(-r + h * static_cast<double>(i));
  std::vector<double> out;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    for (std::size_t j = 0; j < d; ++j) out.push_back(axis[idx[j]]);
    std::size_t j = 0;
    while (j < d && ++idx[j] > k) idx[j++] = 0;
    if (j == d) break;
  }
  return out;
}

namespace {

// Vertices whose rescaled embedding lies in the closed ball B_E(rho, r).
std::vector<VertexId> euclidean_ball(const WeightedGraph& g, const ScalingTriple& s, double r) {
  const auto c = g.coord(g.root());
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (euclidean_distance(g.coord(v), c) / s.embed_scale <= r + 1e-12) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<TightnessRow> tightness_profile(const WeightedGraph& g, const ScalingTriple& s,
                                            const std::vector<double>& t_grid, double r,
                                            const std::vector<double>& deltas) {
  const auto rows = smoothed_rows_at(g, g.root(), steps_for(s, t_grid));
  const auto ball = euclidean_ball(g, s, r);
  require(ball.size() <= 5000, ErrorKind::Capacity, "tightness profile limited to 5000 vertices");
  std::vector<TightnessRow> out;
  for (double delta : deltas) out.push_back({s.level, delta, 0.0});
  for (VertexId x : ball) {
    const auto dist = hop_distances(g, x);
    for (VertexId y : ball) {
      double diff = 0.0;
      for (const auto& row : rows) diff = std::max(diff, std::abs(row[x] - row[y]));
      for (auto& tr : out) {
        if (static_cast<double>(dist[y]) <= s.alpha * tr.delta) {
          tr.value = std::max(tr.value, s.beta * diff);
        }
      }
    }
  }
  return out;
}

Comparability metric_comparability(const WeightedGraph& g, const ScalingTriple& s, double r,
                                   std::size_t max_pairs, std::uint64_t seed) {
  const auto ball = euclidean_ball(g, s, r);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  const std::size_t all = ball.size() * (ball.size() - 1) / 2;
  if (all <= max_pairs) {
    for (std::size_t i = 0; i < ball.size(); ++i) {
      for (std::size_t j = i + 1; j < ball.size(); ++j) pairs.emplace_back(ball[i], ball[j]);
    }
  } else {
    CounterRng rng(seed, 0xc0);
    while (pairs.size() < max_pairs) {
      const auto i = rng.below(ball.size());
      const auto j = rng.below(ball.size());
      if (i != j) pairs.emplace_back(ball[i], ball[j]);
    }
    std::sort(pairs.begin(), pairs.end());
  }
  require(!pairs.empty(), ErrorKind::InvalidArgument, "no vertex pairs inside the ball");
  Comparability c;
  c.c1_hat = std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  VertexId last = kUnreachable;
  std::vector<std::size_t> dist;
  for (const auto& [x, y] : pairs) {
    if (x != last) {
      dist = hop_distances(g, x);
      last = x;
    }
    const double de = s.alpha * euclidean_distance(g.coord(x), g.coord(y)) / s.embed_scale;
    const double dg = static_cast<double>(dist[y]);
    if (de <= 0.0) continue;
    c.c1_hat = std::min(c.c1_hat, dg / de);
    c.c2_hat = std::max(c.c2_hat, dg / de);
    sx += de;
    sy += dg;
    sxx += de * de;
    sxy += de * dg;
    ++c.pairs;
  }
  const double n = static_cast<double>(c.pairs);
  const double den = n * sxx - sx * sx;
  if (den > 0.0) {
    c.slope = (n * sxy - sx * sy) / den;
    c.alpha_tilde = (sy - c.slope * sx) / n;
  } else {
    c.slope = c.c2_hat;
  }
  if (std::abs(c.alpha_tilde) < 1e-9 * std::max(1.0, sy / n)) c.alpha_tilde = 0.0;
  return c;
}

std::vector<MeasureRow> measure_convergence(const WeightedGraph& g, const ScalingTriple& s,
                                            const std::vector<double>& centers,
                                            const std::vector<double>& radii) {
  const std::size_t d = g.dim();
  require(d > 0 && centers.size() % d == 0, ErrorKind::InvalidArgument,
          "centers must be flattened with the graph's dimension");
  std::vector<MeasureRow> out;
  for (std::size_t c = 0; c * d < centers.size(); ++c) {
    std::vector<double> p(d);
    for (std::size_t j = 0; j < d; ++j) p[j] = s.embed_scale * centers[c * d + j];
    for (double r : radii) {
      double mass = 0.0;
      for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (euclidean_distance(g.coord(v), p) <= r * s.embed_scale * (1.0 + 1e-12)) {
          mass += g.vertex_weight(v);
        }
      }
      out.push_back({s.level, c, r, mass / s.beta});
    }
  }
  return out;
}

bool cauchy_decreasing(const std::vector<std::vector<MeasureRow>>& per_level) {
  if (per_level.size() < 3) return true;
  for (std::size_t k = 0; k < per_level.front().size(); ++k) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t l = 1; l < per_level.size(); ++l) {
      const double diff = std::abs(per_level[l][k].value - per_level[l - 1][k].value);
      if (diff > prev * (1.0 + 1e-9) + 1e-12) return false;
      prev = diff;
    }
  }
  return true;
}

EinsteinReport einstein_check(const std::vector<ScalingTriple>& triples, double kappa) {
  EinsteinReport r;
  for (const auto& s : triples) r.ratios.push_back(std::pow(s.alpha, kappa) * s.beta / s.gamma);
  if (!r.ratios.empty()) {
    r.ratio_min = *std::min_element(r.ratios.begin(), r.ratios.end());
    r.ratio_max = *std::max_element(r.ratios.begin(), r.ratios.end());
  }
  return r;
}

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorKind::InvalidArgument,
          "fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, ErrorKind::InvalidArgument, "log fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  const double den = n * sxx - sx * sx;
  require(den > 0.0, ErrorKind::InvalidArgument, "fit needs distinct abscissae");
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

SlopeFit exit_time_slope(const WeightedGraph& g, VertexId center, const std::vector<double>& radii) {
  SlopeFit f;
  f.radii = radii;
  for (double r : radii) f.exit_times.push_back(mean_exit_time(g, center, r)[center]);
  std::tie(f.slope, f.intercept) = loglog_fit(f.radii, f.exit_times);
  return f;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::InvalidArgument, "KS needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

std::vector<std::vector<double>> tree_root_kernel_samples(std::size_t n,
                                                         const std::vector<std::uint64_t>& seeds,
                                                         const std::vector<double>& t_grid,
                                                         std::size_t workers) {
  for (double t : t_grid) require(t > 0.0, ErrorKind::InvalidArgument, "times must be positive");
  const ScalingTriple s = scaling_for(Family::tree, static_cast<double>(n), {});
  const auto steps = steps_for(s, t_grid);
  std::vector<std::vector<double>> out(t_grid.size(), std::vector<double>(seeds.size()));
  parallel_for(seeds.size(), workers, [&](std::size_t k) {
    const WeightedGraph g = tree_to_graph(sample_uniform_tree(n, seeds[k]));
    const auto rows = smoothed_rows_at(g, g.root(), steps);
    for (std::size_t i = 0; i < t_grid.size(); ++i) out[i][k] = s.beta * rows[i][g.root()];
  });
  return out;
}

std::vector<KsRow> tree_distribution_stability(const std::vector<std::size_t>& sizes,
                                               const std::vector<std::uint64_t>& seeds,
                                               const std::vector<double>& t_grid,
                                               std::size_t workers) {
  std::vector<std::vector<std::vector<double>>> samples;
  for (std::size_t n : sizes) samples.push_back(tree_root_kernel_samples(n, seeds, t_grid, workers));
  std::vector<KsRow> out;
  for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      out.push_back({sizes[k], sizes[k + 1], t_grid[i], ks_statistic(samples[k][i], samples[k + 1][i])});
    }
  }
  return out;
}

}  // namespace walklab
