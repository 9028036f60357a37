#include "walklab/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "walklab/error.hpp"
#include "walklab/parallel.hpp"

namespace walklab {

double ConductanceSet::max_entry() const { return C.size() ? C.maxCoeff() : 0.0; }

double ConductanceSet::energy(const std::vector<double>& f) const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < C.cols(); ++j) {
      const double d = f[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(j)];
      s += C(i, j) * d * d;
    }
  }
  return s;
}

std::vector<double> ConductanceSet::pair_values() const {
  std::vector<double> out;
  for (const auto& [i, j] : v0_pairs(size())) {
    out.push_back(C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }
  return out;
}

ConductanceSet ConductanceSet::from_pairs(std::size_t m, const std::vector<double>& values) {
  const auto pairs = v0_pairs(m);
  require(values.size() == pairs.size(), ErrorKind::InvalidArgument,
          "conductance vector must have one value per pair");
  ConductanceSet c;
  c.C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(pairs[k].first);
    const auto j = static_cast<Eigen::Index>(pairs[k].second);
    c.C(i, j) = c.C(j, i) = values[k];
  }
  return c;
}

ConductanceSet ConductanceSet::uniform(std::size_t m, double value) {
  return from_pairs(m, std::vector<double>(m * (m - 1) / 2, value));
}

void validate_conductance(const ConductanceSet& c) {
  const auto m = static_cast<Eigen::Index>(c.size());
  require(m >= 2 && c.C.cols() == m, ErrorKind::InvalidArgument,
          "conductance set needs a square matrix on at least 2 points");
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) continue;
      require(std::isfinite(c.C(i, j)) && c.C(i, j) >= 0.0, ErrorKind::InvalidArgument,
              "conductances must be finite and nonnegative");
      require(c.C(i, j) == c.C(j, i), ErrorKind::InvalidArgument, "conductances must be symmetric");
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j != i && c.C(i, j) > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        stack.push_back(j);
      }
    }
  }
  require(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }),
          ErrorKind::ConnectivityDefect, "conductance set is degenerate (disconnected)");
}

Network network_from_graph(const WeightedGraph& g) { return {g.num_vertices(), g.edges()}; }

Network replicate_cells(const Prefractal& pf, const std::vector<ConductanceSet>& per_cell) {
  require(per_cell.size() == pf.cells.size(), ErrorKind::InvalidArgument,
          "one conductance set per cell required");
  Network net;
  net.n = pf.graph.num_vertices();
  for (std::size_t w = 0; w < pf.cells.size(); ++w) {
    const auto& ids = pf.cells[w];
    const auto& C = per_cell[w].C;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const double c = C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (c > 0.0) net.edges.push_back({ids[i], ids[j], c});
      }
    }
  }
  return net;
}

Network replicate(const IfsSpec& ifs, const ConductanceSet& c) {
  validate_conductance(c);
  require(c.size() == ifs.v0.size(), ErrorKind::InvalidArgument,
          "conductance set must live on V_0");
  const Prefractal pf = build_prefractal_cells(ifs, 1);
  return replicate_cells(pf, std::vector<ConductanceSet>(pf.cells.size(), c));
}

ConductanceSet trace_to(const Network& net, const std::vector<VertexId>& B) {
  require(!B.empty(), ErrorKind::InvalidArgument, "trace target must be nonempty");
  const std::size_t n = net.n;
  std::vector<long> bpos(n, -1);
  for (std::size_t k = 0; k < B.size(); ++k) {
    require(B[k] < n && bpos[B[k]] < 0, ErrorKind::InvalidArgument,
            "trace target must be distinct vertices");
    bpos[B[k]] = static_cast<long>(k);
  }
  std::vector<long> ipos(n, -1);
  std::size_t ni = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (bpos[v] < 0) ipos[v] = static_cast<long>(ni++);
  }
  const auto nb = static_cast<Eigen::Index>(B.size());
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nb, nb);      // L_BB
  Eigen::MatrixXd LIB = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ni), nb);
  std::vector<Eigen::Triplet<double>> trip;
  for (const Edge& e : net.edges) {
    const double w = e.weight;
    const long bu = bpos[e.u], bv = bpos[e.v];
    const long iu = ipos[e.u], iv = ipos[e.v];
    if (bu >= 0) S(bu, bu) += w; else trip.emplace_back(iu, iu, w);
    if (bv >= 0) S(bv, bv) += w; else trip.emplace_back(iv, iv, w);
    if (bu >= 0 && bv >= 0) {
      S(bu, bv) -= w;
      S(bv, bu) -= w;
    } else if (bu >= 0) {
      LIB(iv, bu) -= w;
    } else if (bv >= 0) {
      LIB(iu, bv) -= w;
    } else {
      trip.emplace_back(iu, iv, -w);
      trip.emplace_back(iv, iu, -w);
    }
  }
  if (ni > 0) {
    Eigen::SparseMatrix<double> LII(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(ni));
    LII.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(LII);
    require(solver.info() == Eigen::Success, ErrorKind::ConnectivityDefect,
            "interior block is singular (interior not connected to the trace set)");
    Eigen::MatrixXd X = solver.solve(LIB);
    X += solver.solve(LIB - LII * X);
    require(X.allFinite(), ErrorKind::ConnectivityDefect, "interior block is singular");
    S -= LIB.transpose() * X;
  }
  ConductanceSet out;
  out.C = Eigen::MatrixXd::Zero(nb, nb);
  const double scale = S.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < nb; ++i) {
    for (Eigen::Index j = i + 1; j < nb; ++j) {
      double c = -0.5 * (S(i, j) + S(j, i));
      if (c < 0.0 && c > -1e-12 * scale) c = 0.0;
      out.C(i, j) = out.C(j, i) = c;
    }
  }
  return out;
}

ConductanceSet renormalize(const IfsSpec& ifs, const ConductanceSet& c) {
  const Prefractal pf = build_prefractal_cells(ifs, 1);
  validate_conductance(c);
  return trace_to(replicate_cells(pf, std::vector<ConductanceSet>(pf.cells.size(), c)), pf.boundary);
}

FixedPointResult lambda_fixed_point(const IfsSpec& ifs, const ConductanceSet& c0, double tol,
                                    std::size_t max_iter) {
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  validate_conductance(c0);
  require(c0.size() == ifs.v0.size(), ErrorKind::InvalidArgument, "C0 must live on V_0");
  const Prefractal pf = build_prefractal_cells(ifs, 1);
  FixedPointResult r;
  ConductanceSet c = c0;
  c.C /= c.max_entry();
  for (std::size_t it = 1; it <= max_iter; ++it) {
    ConductanceSet d =
        trace_to(replicate_cells(pf, std::vector<ConductanceSet>(pf.cells.size(), c)), pf.boundary);
    const double md = d.max_entry();
    require(md > 0.0, ErrorKind::ConnectivityDefect, "renormalized conductances vanished");
    d.C /= md;
    const double change = (d.C - c.C).cwiseAbs().maxCoeff();
    r.trajectory.push_back(change);
    c = std::move(d);
    r.iterations = it;
    if (change < tol) {
      ConductanceSet e = trace_to(
          replicate_cells(pf, std::vector<ConductanceSet>(pf.cells.size(), c)), pf.boundary);
      r.lambda = c.max_entry() / e.max_entry();
      r.fixed_point = c;
      require(r.lambda > 1.0, ErrorKind::Violation,
              "renormalization factor lambda = " + std::to_string(r.lambda) + " is not > 1");
      return r;
    }
  }
  fail(ErrorKind::NonConvergence,
       "fixed-point iteration did not converge in " + std::to_string(max_iter) +
           " iterations (last change " + std::to_string(r.trajectory.back()) + ")");
}

std::vector<ConductanceSet> draw_cell_conductances(const IfsSpec& ifs, const WeightLaw& law,
                                                   std::size_t level) {
  validate_law(law);
  const std::size_t m = ifs.v0.size();
  const std::size_t npairs = m * (m - 1) / 2;
  const auto cells =
      static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(ifs.N()), static_cast<double>(level))));
  std::vector<ConductanceSet> out;
  out.reserve(cells);
  std::vector<double> vals(npairs);
  for (std::size_t w = 0; w < cells; ++w) {
    for (std::size_t k = 0; k < npairs; ++k) {
      const std::uint64_t key =
          law.kind == WeightLaw::Kind::cell_symmetric ? cell_pair_key(w, k) : w * npairs + k;
      vals[k] = draw_weight(law, key);
    }
    out.push_back(ConductanceSet::from_pairs(m, vals));
  }
  return out;
}

ConductanceSet homogenize_one(const IfsSpec& ifs, const WeightLaw& law, std::size_t level,
                              double lambda, TraceMode mode) {
  const double factor = std::pow(lambda, static_cast<double>(level));
  std::vector<ConductanceSet> cells = draw_cell_conductances(ifs, law, level);
  if (level == 0) {
    ConductanceSet c = cells.front();
    return c;
  }
  if (mode == TraceMode::direct) {
    const double count = std::pow(static_cast<double>(ifs.N()), static_cast<double>(level)) *
                         static_cast<double>(ifs.v0.size());
    require(count <= 2e5, ErrorKind::Capacity,
            "direct trace limited to 200000 cell corners; use nested mode");
    const Prefractal pf = build_prefractal_cells(ifs, level);
    ConductanceSet c = trace_to(replicate_cells(pf, cells), pf.boundary);
    c.C *= factor;
    return c;
  }
  const Prefractal pf1 = build_prefractal_cells(ifs, 1);
  const std::size_t N = ifs.N();
  while (cells.size() > 1) {
    std::vector<ConductanceSet> next(cells.size() / N);
    for (std::size_t p = 0; p < next.size(); ++p) {
      std::vector<ConductanceSet> group(cells.begin() + static_cast<std::ptrdiff_t>(p * N),
                                        cells.begin() + static_cast<std::ptrdiff_t>((p + 1) * N));
      next[p] = trace_to(replicate_cells(pf1, group), pf1.boundary);
    }
    cells = std::move(next);
  }
  cells.front().C *= factor;
  return cells.front();
}

std::vector<HomogenizeSample> homogenize(const IfsSpec& ifs, const WeightLaw& law, std::size_t level,
                                         const std::vector<std::uint64_t>& seeds, double lambda,
                                         TraceMode mode, std::size_t workers) {
  std::vector<HomogenizeSample> out(seeds.size());
  parallel_for(seeds.size(), workers, [&](std::size_t i) {
    WeightLaw l = law;
    l.seed = seeds[i];
    out[i] = {seeds[i], level, homogenize_one(ifs, l, level, lambda, mode)};
  });
  return out;
}

double max_entry_sd(const std::vector<HomogenizeSample>& samples) {
  require(samples.size() >= 2, ErrorKind::InvalidArgument, "sd needs at least 2 samples");
  const auto m = samples.front().value.C.rows();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      double mean = 0.0;
      for (const auto& s : samples) mean += s.value.C(i, j);
      mean /= static_cast<double>(samples.size());
      double var = 0.0;
      for (const auto& s : samples) var += (s.value.C(i, j) - mean) * (s.value.C(i, j) - mean);
      var /= static_cast<double>(samples.size() - 1);
      worst = std::max(worst, std::sqrt(var));
    }
  }
  return worst;
}

Exponents exponents(double N, double L, double lambda, double alpha) {
  require(N > 1.0 && L > 1.0 && lambda > 1.0 && alpha > 1.0, ErrorKind::InvalidArgument,
          "exponents need N, L, lambda, alpha > 1");
  Exponents e;
  const double la = std::log(alpha);
  e.d_f = std::log(N) / la;
  e.d_w = std::log(N * lambda) / la;
  e.kappa = std::log(lambda) / la;
  e.d_c = la / std::log(L);
  require(std::abs(e.d_w - (e.d_f + e.kappa)) <= 1e-12 * e.d_w, ErrorKind::Violation,
          "d_w != d_f + kappa");
  return e;
}

}  // namespace walklab
