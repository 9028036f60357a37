#include "walklab/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "walklab/error.hpp"

namespace walklab {

namespace {

// +-1 by side of a bipartite connected graph, empty otherwise. On a
// bipartite graph this is the eigenfunction of P for eigenvalue -1.
std::vector<double> bipartite_sign(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<double> side(n, 0.0);
  if (n == 0) return {};
  std::vector<VertexId> stack{0};
  side[0] = 1.0;
  while (!stack.empty()) {
    const VertexId x = stack.back();
    stack.pop_back();
    for (const Neighbor& nb : g.neighbors(x)) {
      if (side[nb.to] == 0.0) {
        side[nb.to] = -side[x];
        stack.push_back(nb.to);
      } else if (side[nb.to] == side[x]) {
        return {};
      }
    }
  }
  return side;
}

// Removes the nu-projection on the constant function and, when given, on the
// bipartite sign. Neither mode decays under P^2, so rounding left in them
// would otherwise put a fixed floor under functions that should vanish.
void project_out_stuck_modes(const WeightedGraph& g, double nu_total,
                             const std::vector<double>& sign, std::vector<double>& f) {
  const double k = total_mass(g, f) / nu_total;
  for (double& v : f) v -= k;
  if (sign.empty()) return;
  double a = 0.0;
  for (VertexId y = 0; y < f.size(); ++y) a += g.vertex_weight(y) * sign[y] * f[y];
  a /= nu_total;
  for (VertexId y = 0; y < f.size(); ++y) f[y] -= a * sign[y];
}

// Weighted Laplacian with the row and column of `ground` removed.
class GroundedSolver {
 public:
  GroundedSolver(const WeightedGraph& g, VertexId ground) : n_(g.num_vertices()), ground_(ground) {
    std::vector<Eigen::Triplet<double>> trip;
    for (VertexId x = 0; x < n_; ++x) {
      if (x == ground_) continue;
      const auto i = idx(x);
      trip.emplace_back(i, i, g.vertex_weight(x));
      for (const Neighbor& nb : g.neighbors(x)) {
        if (nb.to != ground_) trip.emplace_back(i, idx(nb.to), -nb.weight);
      }
    }
    A_.resize(static_cast<Eigen::Index>(n_ - 1), static_cast<Eigen::Index>(n_ - 1));
    A_.setFromTriplets(trip.begin(), trip.end());
    solver_.compute(A_);
    require(solver_.info() == Eigen::Success, ErrorKind::ConnectivityDefect,
            "grounded Laplacian is singular");
  }

  // Potential for the current vector b (entries at ground ignored).
  std::vector<double> solve(const std::vector<double>& b) const {
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n_ - 1));
    for (VertexId x = 0; x < n_; ++x) {
      if (x != ground_) rhs[idx(x)] = b[x];
    }
    Eigen::VectorXd u = solver_.solve(rhs);
    for (int it = 0; it < 2; ++it) u += solver_.solve(rhs - A_ * u);
    require(u.allFinite(), ErrorKind::ConnectivityDefect, "grounded Laplacian solve failed");
    std::vector<double> out(n_, 0.0);
    for (VertexId x = 0; x < n_; ++x) {
      if (x != ground_) out[x] = u[idx(x)];
    }
    return out;
  }

 private:
  Eigen::Index idx(VertexId x) const {
    return static_cast<Eigen::Index>(x < ground_ ? x : x - 1);
  }

  std::size_t n_;
  VertexId ground_;
  Eigen::SparseMatrix<double> A_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

bool within(double lhs, double rhs) {
  return lhs <= rhs + kFloatSlack * std::max(std::abs(lhs), std::abs(rhs));
}

struct Tracker {
  InequalityReport& report;
  std::map<std::pair<std::string, std::size_t>, std::size_t> worst;

  void check(const std::string& name, std::size_t m, VertexId x, VertexId y, double lhs,
             double rhs, bool ok) {
    ++report.checks;
    InequalityRow row{name, m, x, y, lhs, rhs, rhs - lhs};
    if (rhs > 0.0) report.worst_ratio = std::max(report.worst_ratio, lhs / rhs);
    if (!ok) report.violations.push_back(row);
    const auto key = std::make_pair(name, m);
    const auto it = worst.find(key);
    if (it == worst.end()) {
      worst.emplace(key, report.rows.size());
      report.rows.push_back(row);
    } else if (row.slack < report.rows[it->second].slack) {
      report.rows[it->second] = row;
    }
  }
};

}  // namespace

double dirichlet_energy(const WeightedGraph& g, std::span<const double> f) {
  return dirichlet_energy(g, f, f);
}

double dirichlet_energy(const WeightedGraph& g, std::span<const double> f,
                        std::span<const double> h) {
  require(f.size() == g.num_vertices() && h.size() == g.num_vertices(),
          ErrorKind::InvalidArgument, "function must be defined on every vertex");
  double s = 0.0;
  for (const Edge& e : g.edges()) s += e.weight * (f[e.u] - f[e.v]) * (h[e.u] - h[e.v]);
  return s;
}

std::vector<double> generator_apply(const WeightedGraph& g, std::span<const double> f) {
  std::vector<double> out(g.num_vertices());
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    double s = 0.0;
    for (const Neighbor& nb : g.neighbors(x)) s += nb.weight * (f[nb.to] - f[x]);
    out[x] = s / g.vertex_weight(x);
  }
  return out;
}

double generator_form(const WeightedGraph& g, std::span<const double> f) {
  const auto lf = generator_apply(g, f);
  double s = 0.0;
  for (VertexId x = 0; x < g.num_vertices(); ++x) s -= g.vertex_weight(x) * lf[x] * f[x];
  return s;
}

ResistanceSolution effective_resistance(const WeightedGraph& g, VertexId x, VertexId y) {
  require(x < g.num_vertices() && y < g.num_vertices(), ErrorKind::InvalidArgument,
          "resistance endpoints must be vertices");
  require(x != y, ErrorKind::InvalidArgument, "effective resistance needs x != y");
  GroundedSolver solver(g, y);
  std::vector<double> b(g.num_vertices(), 0.0);
  b[x] = 1.0;
  ResistanceSolution s;
  s.potential = solver.solve(b);
  s.value = s.potential[x];
  return s;
}

std::vector<double> resistances_from(const WeightedGraph& g, VertexId rho) {
  GroundedSolver solver(g, rho);
  std::vector<double> r(g.num_vertices(), 0.0);
  std::vector<double> b(g.num_vertices(), 0.0);
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    if (x == rho) continue;
    b[x] = 1.0;
    r[x] = solver.solve(b)[x];
    b[x] = 0.0;
  }
  return r;
}

Eigen::MatrixXd all_pairs_resistance(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  require(n <= 4000, ErrorKind::Capacity, "all-pairs resistance limited to 4000 vertices");
  const VertexId ground = g.root();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const Edge& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    A(u, u) += e.weight;
    A(v, v) += e.weight;
    A(u, v) -= e.weight;
    A(v, u) -= e.weight;
  }
  const auto gi = static_cast<Eigen::Index>(ground);
  A.row(gi).setZero();
  A.col(gi).setZero();
  A(gi, gi) = 1.0;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  require(ldlt.info() == Eigen::Success, ErrorKind::ConnectivityDefect,
          "grounded Laplacian is singular");
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  Eigen::MatrixXd G = ldlt.solve(I);
  G += ldlt.solve(I - A * G);
  G(gi, gi) = 0.0;
  Eigen::MatrixXd R(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    for (Eigen::Index j = 0; j < R.cols(); ++j) R(i, j) = G(i, i) + G(j, j) - G(i, j) - G(j, i);
    R(i, i) = 0.0;
  }
  return R;
}

double ResistanceProfile::V(double r) const {
  const auto it = std::upper_bound(radii.begin(), radii.end(), r);
  if (it == radii.begin()) return 0.0;
  return volume[static_cast<std::size_t>(it - radii.begin()) - 1];
}

double ResistanceProfile::h(double r) const { return r * V(r); }

double ResistanceProfile::h_inverse(double m) const {
  require(m >= 0.0, ErrorKind::InvalidArgument, "h^{-1} needs m >= 0");
  // Last step whose left end satisfies h(r_i) <= m.
  std::size_t i = 0;
  while (i + 1 < radii.size() && radii[i + 1] * volume[i + 1] <= m) ++i;
  const double r = m / volume[i];
  if (i + 1 < radii.size()) return std::min(r, radii[i + 1]);
  return r;
}

ResistanceProfile profile_from_resistances(const WeightedGraph& g, VertexId rho,
                                           std::vector<double> resistance) {
  ResistanceProfile p;
  p.center = rho;
  p.resistance = std::move(resistance);
  std::vector<std::pair<double, double>> rm;
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    rm.emplace_back(x == rho ? 0.0 : p.resistance[x], g.vertex_weight(x));
  }
  std::sort(rm.begin(), rm.end());
  const double scale = rm.back().first;
  double mass = 0.0;
  for (const auto& [r, w] : rm) {
    mass += w;
    // Merge values equal up to solver round-off.
    if (!p.radii.empty() && r - p.radii.back() <= 1e-12 * scale) {
      p.volume.back() = mass;
    } else {
      p.radii.push_back(r);
      p.volume.push_back(mass);
    }
  }
  return p;
}

ResistanceProfile resistance_profile(const WeightedGraph& g, VertexId rho) {
  return profile_from_resistances(g, rho, resistances_from(g, rho));
}

std::string InequalityReport::describe_first_violation() const {
  if (violations.empty()) return "no violations";
  const auto& v = violations.front();
  return v.inequality + " violated at m=" + std::to_string(v.m) + " x=" + std::to_string(v.x) +
         " y=" + std::to_string(v.y) + ": lhs=" + format_double(v.lhs) +
         " rhs=" + format_double(v.rhs);
}

InequalityReport verify_energy_chain(const WeightedGraph& g, VertexId rho, std::size_t M) {
  return verify_energy_chain(g, rho, M, resistance_profile(g, rho));
}

InequalityReport verify_energy_chain(const WeightedGraph& g, VertexId rho, std::size_t M,
                                     const ResistanceProfile& profile) {
  require(M >= 2, ErrorKind::InvalidArgument, "energy chain needs M >= 2");
  const KernelTable q = smoothed_table(g, rho, 2 * M + 2);
  InequalityReport report;
  Tracker track{report, {}};
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double prev_energy = std::numeric_limits<double>::infinity();
  report.identity_ratio_min = std::numeric_limits<double>::infinity();
  report.identity_ratio_max = 0.0;
  // d_k = q_k - q_{k+2} is carried forward by the walk itself, so the
  // difference keeps full relative precision near equilibrium.
  std::vector<double> dk(g.num_vertices());
  std::vector<double> dnext(dk.size());
  for (std::size_t y = 0; y < dk.size(); ++y) dk[y] = q.rows[0][y] - q.rows[2][y];
  std::size_t dk_step = 0;
  // Same for the fluctuation of q_m around the constant equilibrium density;
  // the energy ignores constants and is taken from the fluctuation.
  const double nu_total = node_measure(g).total();
  const std::vector<double> sign = bipartite_sign(g);
  project_out_stuck_modes(g, nu_total, sign, dk);
  std::vector<double> fm = q.rows[0];
  project_out_stuck_modes(g, nu_total, sign, fm);
  for (std::size_t m = 1; m <= M; ++m) {
    apply_transition(g, fm, dnext);
    fm.swap(dnext);
    project_out_stuck_modes(g, nu_total, sign, fm);
    const double e = dirichlet_energy(g, fm);
    const double q2m = q.rows[2 * m][rho];
    for (; dk_step < 2 * m; ++dk_step) {
      apply_transition(g, dk, dnext);
      dk.swap(dnext);
      project_out_stuck_modes(g, nu_total, sign, dk);
    }
    const double diff = dk[rho];

    const double floor = 64.0 * eps * std::abs(q2m);
    const double err = std::abs(2.0 * e - diff);
    track.check("energy_identity", m, rho, rho, err, kIdentityTolerance * std::abs(diff) + floor,
                err <= kIdentityTolerance * std::abs(diff) + floor);
    if (std::abs(diff) > 1e6 * floor) {
      report.identity_max_rel_error = std::max(report.identity_max_rel_error, err / std::abs(diff));
    }
    if (e > 1e6 * floor) {
      report.identity_ratio_min = std::min(report.identity_ratio_min, diff / e);
      report.identity_ratio_max = std::max(report.identity_ratio_max, diff / e);
    }

    if (m > 1) {
      const double tol = 64.0 * eps * std::abs(q2m);
      track.check("energy_monotone", m, rho, rho, e, prev_energy, e <= prev_energy + tol);
    }
    prev_energy = e;

    const std::size_t half = 2 * ((m + 1) / 2);
    const double rhs43 = 2.0 * q.rows[half][rho] / static_cast<double>(m);
    track.check("energy_decay_bound", m, rho, rho, e, rhs43, within(e, rhs43));

    const double rhsd = 3.0 * profile.h_inverse(static_cast<double>(m)) / static_cast<double>(m);
    track.check("on_diagonal_bound", m, rho, rho, q2m, rhsd, within(q2m, rhsd));
  }
  if (report.identity_ratio_min > report.identity_ratio_max) {
    report.identity_ratio_min = report.identity_ratio_max = 0.0;
  }
  return report;
}

InequalityReport verify_oscillation_bound(const WeightedGraph& g, VertexId rho, std::size_t M,
                                          const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                          const KernelTable* kernel) {
  require(M >= 1, ErrorKind::InvalidArgument, "oscillation bound needs M >= 1");
  const std::size_t n = g.num_vertices();
  std::vector<std::pair<VertexId, VertexId>> work = pairs;
  if (work.empty()) {
    for (VertexId x = 0; x < n; ++x) {
      for (VertexId y = x + 1; y < n; ++y) work.emplace_back(x, y);
    }
  }
  for (const auto& [x, y] : work) {
    require(x < n && y < n, ErrorKind::InvalidArgument, "pair vertex out of range");
  }
  require(n <= 4000, ErrorKind::Capacity, "oscillation bound check limited to 4000 vertices");
  const Eigen::MatrixXd R = all_pairs_resistance(g);
  std::vector<double> rxy(work.size());
  for (std::size_t k = 0; k < work.size(); ++k) {
    rxy[k] = R(static_cast<Eigen::Index>(work[k].first), static_cast<Eigen::Index>(work[k].second));
  }
  std::vector<double> from(n);
  for (VertexId x = 0; x < n; ++x) {
    from[x] = R(static_cast<Eigen::Index>(rho), static_cast<Eigen::Index>(x));
  }
  const ResistanceProfile profile = profile_from_resistances(g, rho, from);

  InequalityReport report;
  Tracker track{report, {}};
  auto body = [&](std::size_t m, std::span<const double> q) {
    if (m == 0) return;
    const double c = 12.0 * profile.h_inverse(static_cast<double>((m + 1) / 2)) /
                     (static_cast<double>(m) * static_cast<double>(m));
    // Only the worst pair per m is recorded; every violation is kept.
    std::size_t worst = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < work.size(); ++k) {
      const auto [x, y] = work[k];
      const double d = q[x] - q[y];
      const double lhs = d * d;
      const double rhs = c * rxy[k];
      if (rhs - lhs < worst_slack) {
        worst_slack = rhs - lhs;
        worst = k;
      }
      if (rhs > 0.0) report.worst_ratio = std::max(report.worst_ratio, lhs / rhs);
      if (!within(lhs, rhs)) {
        report.violations.push_back({"oscillation_bound", m, x, y, lhs, rhs, rhs - lhs});
      }
    }
    const auto [x, y] = work[worst];
    const double d = q[x] - q[y];
    track.check("oscillation_bound", m, x, y, d * d, c * rxy[worst], true);
    report.checks += work.size() - 1;
  };
  if (kernel) {
    require(kernel->rows.size() >= M + 1, ErrorKind::InvalidArgument,
            "kernel table shorter than the requested horizon");
    for (std::size_t m = 0; m <= M; ++m) {
      require(kernel->rows[m].size() == n, ErrorKind::InvalidArgument,
              "kernel row " + std::to_string(m) + " does not cover every vertex");
      body(m, kernel->rows[m]);
    }
  } else {
    for_each_smoothed_row(g, rho, M, body);
  }
  return report;
}

void append_inequality_csv(const InequalityReport& r, std::ostream& out) {
  for (const auto& row : r.rows) {
    out << row.inequality << ',' << row.m << ',' << row.x << ',' << row.y << ','
        << format_double(row.lhs) << ',' << format_double(row.rhs) << ','
        << format_double(row.slack) << '\n';
  }
}

void write_inequality_csv(const InequalityReport& r, const std::string& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::InvalidArgument, "cannot open " + path);
  out << "inequality,m,x,y,lhs,rhs,slack\n";
  append_inequality_csv(r, out);
}

}  // namespace walklab
