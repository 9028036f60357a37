#include "walklab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "walklab/error.hpp"
#include "walklab/parallel.hpp"

namespace walklab {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void apply_transition(const WeightedGraph& g, std::span<const double> f, std::span<double> out) {
  const std::size_t n = g.num_vertices();
  for (VertexId x = 0; x < n; ++x) {
    double s = 0.0;
    for (const Neighbor& nb : g.neighbors(x)) s += nb.weight * f[nb.to];
    out[x] = s / g.vertex_weight(x);
  }
}

std::vector<double> delta_density(const WeightedGraph& g, VertexId source) {
  require(source < g.num_vertices(), ErrorKind::InvalidArgument,
          "source " + std::to_string(source) + " is not a vertex");
  std::vector<double> d(g.num_vertices(), 0.0);
  d[source] = 1.0 / g.vertex_weight(source);
  return d;
}

KernelTable evolve_distribution(const WeightedGraph& g, VertexId start, long long steps) {
  require(steps >= 0, ErrorKind::InvalidArgument, "step count must be nonnegative");
  KernelTable t;
  t.source = start;
  t.flavor = KernelFlavor::raw;
  t.rows.reserve(static_cast<std::size_t>(steps) + 1);
  t.rows.push_back(delta_density(g, start));
  for (long long m = 0; m < steps; ++m) {
    std::vector<double> next(g.num_vertices());
    apply_transition(g, t.rows.back(), next);
    t.rows.push_back(std::move(next));
  }
  return t;
}

KernelTable smoothed_kernel(const KernelTable& raw) {
  require(raw.flavor == KernelFlavor::raw, ErrorKind::InvalidArgument,
          "smoothing expects a raw table");
  require(raw.rows.size() >= 2, ErrorKind::InvalidArgument,
          "smoothing q_m needs raw rows m and m+1");
  KernelTable q;
  q.source = raw.source;
  q.flavor = KernelFlavor::smoothed;
  q.rows.resize(raw.rows.size() - 1);
  for (std::size_t m = 0; m + 1 < raw.rows.size(); ++m) {
    const auto& a = raw.rows[m];
    const auto& b = raw.rows[m + 1];
    q.rows[m].resize(a.size());
    for (std::size_t y = 0; y < a.size(); ++y) q.rows[m][y] = 0.5 * (a[y] + b[y]);
  }
  return q;
}

KernelTable smoothed_table(const WeightedGraph& g, VertexId start, std::size_t steps) {
  return smoothed_kernel(evolve_distribution(g, start, static_cast<long long>(steps) + 1));
}

void for_each_smoothed_row(const WeightedGraph& g, VertexId start, std::size_t steps,
                           const std::function<void(std::size_t, std::span<const double>)>& fn) {
  std::vector<double> cur = delta_density(g, start);
  std::vector<double> next(cur.size());
  std::vector<double> q(cur.size());
  for (std::size_t m = 0; m <= steps; ++m) {
    apply_transition(g, cur, next);
    for (std::size_t y = 0; y < q.size(); ++y) q[y] = 0.5 * (cur[y] + next[y]);
    fn(m, q);
    cur.swap(next);
  }
}

std::vector<std::vector<double>> smoothed_rows_at(const WeightedGraph& g, VertexId start,
                                                  const std::vector<std::size_t>& steps) {
  std::vector<std::vector<double>> out(steps.size());
  if (steps.empty()) return out;
  const std::size_t top = *std::max_element(steps.begin(), steps.end());
  for_each_smoothed_row(g, start, top, [&](std::size_t m, std::span<const double> q) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i] == m) out[i].assign(q.begin(), q.end());
    }
  });
  return out;
}

std::map<VertexId, KernelTable> two_point_kernel(const WeightedGraph& g,
                                                 const std::vector<VertexId>& sources,
                                                 std::size_t steps, std::size_t workers) {
  for (VertexId s : sources) {
    require(s < g.num_vertices(), ErrorKind::InvalidArgument,
            "source " + std::to_string(s) + " is not a vertex");
  }
  std::vector<KernelTable> tables(sources.size());
  parallel_for(sources.size(), workers, [&](std::size_t i) {
    tables[i] = evolve_distribution(g, sources[i], static_cast<long long>(steps));
  });
  std::map<VertexId, KernelTable> out;
  for (std::size_t i = 0; i < sources.size(); ++i) out.emplace(sources[i], std::move(tables[i]));
  for (const auto& [x, tx] : out) {
    for (const auto& [y, ty] : out) {
      if (x >= y) continue;
      for (std::size_t m = 0; m <= steps; ++m) {
        const double a = tx.rows[m][y];
        const double b = ty.rows[m][x];
        require(std::abs(a - b) <= 1e-10 * std::max({std::abs(a), std::abs(b), 1e-300}) + 1e-300,
                ErrorKind::Violation,
                "kernel symmetry violated at m=" + std::to_string(m) + " for (" +
                    std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> continuous_kernel(const WeightedGraph& g, VertexId source,
                                                   const std::vector<double>& times, double tol) {
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  for (double t : times) require(t > 0.0, ErrorKind::InvalidArgument, "times must be positive");
  std::vector<std::vector<double>> out(times.size(),
                                       std::vector<double>(g.num_vertices(), 0.0));
  if (times.empty()) return out;
  // Jump counts needed per time: smallest K with Poisson(t) tail beyond K < tol.
  std::vector<std::size_t> kmax(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    // Past the mode the tail after k is at most w_{k+1} / (1 - t/(k+2)).
    std::size_t k = 0;
    while (true) {
      const double kk = static_cast<double>(k);
      if (kk + 2.0 > 2.0 * t) {
        const double next = std::exp(-t + (kk + 1.0) * std::log(t) - std::lgamma(kk + 2.0));
        if (next / (1.0 - t / (kk + 2.0)) < tol) break;
      }
      ++k;
      require(k < 100000000, ErrorKind::NonConvergence, "Poisson truncation did not converge");
    }
    kmax[i] = k;
  }
  const std::size_t top = *std::max_element(kmax.begin(), kmax.end());
  std::vector<double> cur = delta_density(g, source);
  std::vector<double> next(cur.size());
  for (std::size_t k = 0; k <= top; ++k) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (k > kmax[i]) continue;
      const double t = times[i];
      const double w =
          std::exp(-t + static_cast<double>(k) * std::log(t) - std::lgamma(static_cast<double>(k) + 1.0));
      for (std::size_t y = 0; y < cur.size(); ++y) out[i][y] += w * cur[y];
    }
    apply_transition(g, cur, next);
    cur.swap(next);
  }
  return out;
}

std::vector<double> mean_exit_time(const WeightedGraph& g, VertexId center, double r) {
  const auto ball = hop_ball(g, center, r);
  require(ball.size() < g.num_vertices(), ErrorKind::InvalidArgument,
          "ball covers the whole graph; exit time undefined");
  std::vector<long> local(g.num_vertices(), -1);
  for (std::size_t i = 0; i < ball.size(); ++i) local[ball[i]] = static_cast<long>(i);
  // nu-weighted form of (I - P)u = 1: symmetric positive definite.
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(ball.size()));
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const VertexId x = ball[i];
    const auto ii = static_cast<Eigen::Index>(i);
    trip.emplace_back(ii, ii, g.vertex_weight(x));
    for (const Neighbor& nb : g.neighbors(x)) {
      if (local[nb.to] >= 0) trip.emplace_back(ii, local[nb.to], -nb.weight);
    }
    rhs[ii] = g.vertex_weight(x);
  }
  Eigen::SparseMatrix<double> A(rhs.size(), rhs.size());
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  require(solver.info() == Eigen::Success, ErrorKind::ConnectivityDefect,
          "exit-time system is singular");
  Eigen::VectorXd u = solver.solve(rhs);
  for (int it = 0; it < 2; ++it) u += solver.solve(rhs - A * u);
  std::vector<double> out(g.num_vertices(), 0.0);
  for (std::size_t i = 0; i < ball.size(); ++i) out[ball[i]] = u[static_cast<Eigen::Index>(i)];
  return out;
}

double total_mass(const WeightedGraph& g, std::span<const double> row) {
  double s = 0.0;
  for (VertexId y = 0; y < row.size(); ++y) s += row[y] * g.vertex_weight(y);
  return s;
}

void write_kernel_csv(const KernelTable& t, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::InvalidArgument, "cannot open " + path);
  out << "m,vertex," << (t.flavor == KernelFlavor::smoothed ? "q" : "p") << '\n';
  for (std::size_t m = 0; m < t.rows.size(); ++m) {
    for (std::size_t y = 0; y < t.rows[m].size(); ++y) {
      out << m << ',' << y << ',' << format_double(t.rows[m][y]) << '\n';
    }
  }
}

KernelTable read_kernel_csv(const std::string& path, VertexId source) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::InvalidArgument, "cannot open " + path);
  std::string line;
  std::getline(in, line);
  KernelTable t;
  t.source = source;
  if (line == "m,vertex,q") {
    t.flavor = KernelFlavor::smoothed;
  } else if (line == "m,vertex,p") {
    t.flavor = KernelFlavor::raw;
  } else {
    fail(ErrorKind::InvalidArgument, "unexpected kernel CSV header '" + line + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b, c;
    require(std::getline(ss, a, ',') && std::getline(ss, b, ',') && std::getline(ss, c),
            ErrorKind::InvalidArgument, path + ":" + std::to_string(lineno) + ": malformed row");
    std::size_t m = 0, y = 0;
    double v = 0.0;
    try {
      m = std::stoul(a);
      y = std::stoul(b);
      v = std::stod(c);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, path + ":" + std::to_string(lineno) + ": malformed row");
    }
    if (t.rows.size() <= m) t.rows.resize(m + 1);
    if (t.rows[m].size() <= y) t.rows[m].resize(y + 1, 0.0);
    t.rows[m][y] = v;
  }
  return t;
}

}  // namespace walklab
