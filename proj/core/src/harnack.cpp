#include "walklab/harnack.hpp"

#include <algorithm>
#include <cmath>

#include "walklab/error.hpp"
#include "walklab/parallel.hpp"
#include "walklab/rng.hpp"

namespace walklab {

Cylinder::Cylinder(const WeightedGraph& g, VertexId center, double R, std::size_t T)
    : center_(center), R_(R), T_(T) {
  require(center < g.num_vertices(), ErrorKind::InvalidArgument, "cylinder center is not a vertex");
  require(R >= 2.0 && T >= 4, ErrorKind::InvalidArgument,
          "degenerate cylinder: need R >= 2 and T >= 4");
  closure_ = hop_ball(g, center, R + 1.0);
  interior_ = hop_ball(g, center, R);
  half_ = hop_ball(g, center, R / 2.0);
  local_.assign(g.num_vertices(), -1);
  for (std::size_t i = 0; i < closure_.size(); ++i) local_[closure_[i]] = static_cast<long>(i);
  std::vector<bool> inside(g.num_vertices(), false);
  for (VertexId v : interior_) inside[v] = true;
  for (VertexId v : closure_) {
    if (!inside[v]) ring_.push_back(v);
  }
  const double t = static_cast<double>(T);
  minus_first_ = static_cast<std::size_t>(std::ceil(t / 4.0));
  minus_last_ = static_cast<std::size_t>(std::floor(t / 2.0));
  plus_first_ = static_cast<std::size_t>(std::ceil(3.0 * t / 4.0));
  plus_last_ = T - 1;
  require(minus_first_ <= minus_last_ && plus_first_ <= plus_last_ && !half_.empty(),
          ErrorKind::InvalidArgument, "degenerate cylinder: Q- or Q+ is empty");
}

namespace {

// One heat step on the interior; ring entries of `next` are left to the caller.
void heat_step(const WeightedGraph& g, const Cylinder& cyl, const std::vector<double>& cur,
               std::vector<double>& next) {
  for (VertexId x : cyl.interior()) {
    double s = 0.0;
    for (const Neighbor& nb : g.neighbors(x)) s += nb.weight * cur[static_cast<std::size_t>(cyl.local(nb.to))];
    next[static_cast<std::size_t>(cyl.local(x))] = s / g.vertex_weight(x);
  }
}

// u-hat extremes over the half ball at every n = 0..T-1 for a field.
void hat_profile(const Cylinder& cyl, const CaloricField& f, std::vector<double>& hi,
                 std::vector<double>& lo) {
  const std::size_t T = cyl.T();
  hi.assign(T, 0.0);
  lo.assign(T, 0.0);
  for (std::size_t n = 0; n < T; ++n) {
    double a = -std::numeric_limits<double>::infinity();
    double b = std::numeric_limits<double>::infinity();
    for (VertexId v : cyl.half_ball()) {
      const double h = f.hat(n, static_cast<std::size_t>(cyl.local(v)));
      a = std::max(a, h);
      b = std::min(b, h);
    }
    hi[n] = a;
    lo[n] = b;
  }
}

}  // namespace

CaloricField caloric_evolve(const WeightedGraph& g, const Cylinder& cyl,
                            const std::vector<double>& initial,
                            const std::vector<std::vector<double>>& lateral) {
  const std::size_t nc = cyl.closure().size();
  require(initial.size() == nc, ErrorKind::InvalidArgument,
          "initial data must cover the closure B(x,R+1)");
  require(lateral.size() == cyl.T(), ErrorKind::InvalidArgument,
          "lateral data needs one row per time 1..T");
  for (const auto& row : lateral) {
    require(row.size() == cyl.ring().size(), ErrorKind::InvalidArgument,
            "lateral row must cover the boundary ring");
  }
  CaloricField f;
  f.u.reserve(cyl.T() + 1);
  f.u.push_back(initial);
  for (std::size_t n = 0; n < cyl.T(); ++n) {
    std::vector<double> next(nc, 0.0);
    heat_step(g, cyl, f.u.back(), next);
    for (std::size_t j = 0; j < cyl.ring().size(); ++j) {
      next[static_cast<std::size_t>(cyl.local(cyl.ring()[j]))] = lateral[n][j];
    }
    f.u.push_back(std::move(next));
  }
  return f;
}

double caloric_residual(const WeightedGraph& g, const Cylinder& cyl, const CaloricField& f) {
  double worst = 0.0;
  for (std::size_t n = 0; n < cyl.T(); ++n) {
    for (VertexId x : cyl.interior()) {
      const auto& u = f.u[n];
      const double ux = u[static_cast<std::size_t>(cyl.local(x))];
      double lu = 0.0;
      for (const Neighbor& nb : g.neighbors(x)) {
        lu += nb.weight * (u[static_cast<std::size_t>(cyl.local(nb.to))] - ux);
      }
      lu /= g.vertex_weight(x);
      worst = std::max(worst, std::abs(f.u[n + 1][static_cast<std::size_t>(cyl.local(x))] - ux - lu));
    }
  }
  return worst;
}

std::pair<double, double> harnack_extremes(const Cylinder& cyl, const CaloricField& f) {
  std::vector<double> hi, lo;
  hat_profile(cyl, f, hi, lo);
  double s = -std::numeric_limits<double>::infinity();
  double i = std::numeric_limits<double>::infinity();
  for (std::size_t n = cyl.minus_first(); n <= cyl.minus_last(); ++n) s = std::max(s, hi[n]);
  for (std::size_t n = cyl.plus_first(); n <= cyl.plus_last(); ++n) i = std::min(i, lo[n]);
  return {s, i};
}

PhiResult phi_constant(const WeightedGraph& g, const Cylinder& cyl, std::size_t workers) {
  const std::size_t nc = cyl.closure().size();
  const std::size_t nr = cyl.ring().size();
  const std::size_t T = cyl.T();
  const std::vector<std::vector<double>> zero_lateral(T, std::vector<double>(nr, 0.0));

  // ratio[k]: generator k's sup/inf (NaN when the generator is zero on Q-).
  std::vector<double> initial_ratio(nc);
  parallel_for(nc, workers, [&](std::size_t i) {
    std::vector<double> init(nc, 0.0);
    init[i] = 1.0;
    const auto [s, inf] = harnack_extremes(cyl, caloric_evolve(g, cyl, init, zero_lateral));
    initial_ratio[i] = s <= 0.0 ? std::nan("") : (inf <= 0.0 ? HUGE_VAL : s / inf);
  });

  // A lateral delta at time t is the time-1 response delayed by t-1.
  std::vector<std::vector<double>> lateral_ratio(nr, std::vector<double>(T));
  parallel_for(nr, workers, [&](std::size_t j) {
    std::vector<std::vector<double>> lat = zero_lateral;
    lat[0][j] = 1.0;
    const CaloricField f = caloric_evolve(g, cyl, std::vector<double>(nc, 0.0), lat);
    std::vector<double> hi, lo;
    hat_profile(cyl, f, hi, lo);
    auto at = [](const std::vector<double>& v, long k) {
      return k < 0 ? 0.0 : v[static_cast<std::size_t>(k)];
    };
    for (std::size_t t = 1; t <= T; ++t) {
      const long shift = static_cast<long>(t) - 1;
      double s = -std::numeric_limits<double>::infinity();
      double inf = std::numeric_limits<double>::infinity();
      for (std::size_t n = cyl.minus_first(); n <= cyl.minus_last(); ++n) {
        s = std::max(s, at(hi, static_cast<long>(n) - shift));
      }
      for (std::size_t n = cyl.plus_first(); n <= cyl.plus_last(); ++n) {
        inf = std::min(inf, at(lo, static_cast<long>(n) - shift));
      }
      lateral_ratio[j][t - 1] = s <= 0.0 ? std::nan("") : (inf <= 0.0 ? HUGE_VAL : s / inf);
    }
  });

  PhiResult r;
  r.generators = nc + nr * T;
  r.value = 0.0;
  auto consider = [&](double ratio, const std::string& name) {
    if (std::isnan(ratio)) return;
    if (ratio > r.value) {
      r.value = ratio;
      r.worst_generator = name;
    }
  };
  for (std::size_t i = 0; i < nc; ++i) {
    consider(initial_ratio[i], "initial@" + std::to_string(cyl.closure()[i]));
  }
  for (std::size_t j = 0; j < nr; ++j) {
    for (std::size_t t = 1; t <= T; ++t) {
      consider(lateral_ratio[j][t - 1],
               "lateral@" + std::to_string(cyl.ring()[j]) + ",t=" + std::to_string(t));
    }
  }
  r.infinite = std::isinf(r.value);
  return r;
}

double random_data_ratio(const WeightedGraph& g, const Cylinder& cyl, std::uint64_t seed,
                         std::uint64_t trial) {
  CounterRng rng(seed, trial);
  // Heavy-tailed, often-zero entries so that single generators can dominate.
  auto draw = [&rng] {
    if (rng.uniform() < 0.5) return 0.0;
    const double u = rng.uniform();
    return u * u * u * u;
  };
  std::vector<double> init(cyl.closure().size());
  for (auto& v : init) v = draw();
  std::vector<std::vector<double>> lat(cyl.T(), std::vector<double>(cyl.ring().size()));
  for (auto& row : lat) {
    for (auto& v : row) v = draw();
  }
  const auto [s, inf] = harnack_extremes(cyl, caloric_evolve(g, cyl, init, lat));
  if (s <= 0.0) return 0.0;
  return inf <= 0.0 ? HUGE_VAL : s / inf;
}

bool DecayReport::ok() const {
  return std::all_of(steps.begin(), steps.end(), [](const DecayStep& s) { return s.ok; });
}

DecayReport oscillation_decay_check(const WeightedGraph& g, VertexId x, double R0, double kappa,
                                    double s, double c_h, std::size_t workers) {
  require(kappa >= 2.0, ErrorKind::InvalidArgument, "oscillation decay needs kappa >= 2");
  require(s >= 2.0, ErrorKind::InvalidArgument, "threshold scale must be >= 2");
  const auto T0 = static_cast<std::size_t>(std::llround(std::pow(R0, kappa)));
  R0 = std::pow(static_cast<double>(T0), 1.0 / kappa);
  require(R0 >= s, ErrorKind::InvalidArgument, "R0 below the threshold scale");
  const KernelTable q = smoothed_table(g, x, T0);
  const auto dist = hop_distances(g, x);

  DecayReport report;
  std::vector<double> radii;
  for (double r = R0; r >= s; r /= 2.0) radii.push_back(r);
  std::vector<double> ch(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const auto T = static_cast<std::size_t>(std::floor(std::pow(radii[k], kappa)));
    ch[k] = phi_constant(g, Cylinder(g, x, radii[k], T), workers).value;
  }
  report.c_h = c_h > 0.0 ? c_h : *std::max_element(ch.begin(), ch.end());

  auto osc = [&](double t_lo, std::size_t t_hi, double radius) {
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    const auto m0 = static_cast<std::size_t>(std::max(0.0, std::ceil(t_lo - 1e-9)));
    for (std::size_t m = m0; m <= t_hi; ++m) {
      for (VertexId y = 0; y < g.num_vertices(); ++y) {
        if (static_cast<double>(dist[y]) >= radius) continue;
        hi = std::max(hi, q.rows[m][y]);
        lo = std::min(lo, q.rows[m][y]);
      }
    }
    return hi - lo;
  };
  const double t0 = static_cast<double>(T0);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    DecayStep st;
    st.k = k;
    st.R_k = radii[k];
    const double rk = std::pow(radii[k], kappa);
    st.osc_q = osc(t0 - rk, T0, radii[k]);
    st.osc_q_plus = osc(t0 - std::pow(2.0, -kappa) * rk, T0 - 1, radii[k] / 2.0);
    st.c_h = report.c_h;
    st.rhs = std::isinf(report.c_h) ? st.osc_q : (1.0 - 1.0 / (2.0 * report.c_h)) * st.osc_q;
    st.ok = st.osc_q_plus <= st.rhs * (1.0 + 1e-12) + 1e-300;
    report.steps.push_back(st);
  }
  return report;
}

HolderFit holder_ratio(const WeightedGraph& g, VertexId rho, const std::vector<double>& Rs,
                       const std::vector<double>& Ts, double kappa) {
  require(kappa > 0.0, ErrorKind::InvalidArgument, "kappa must be positive");
  for (double R : Rs) {
    for (double T : Ts) {
      require(std::pow(T, 1.0 / kappa) >= 4.0 * R, ErrorKind::InvalidArgument,
              "Holder hypothesis T^{1/kappa} >= 4R violated at R=" + std::to_string(R) +
                  ", T=" + std::to_string(T));
    }
  }
  std::vector<std::size_t> steps;
  for (double T : Ts) steps.push_back(static_cast<std::size_t>(T));
  const auto rows = smoothed_rows_at(g, rho, steps);
  const auto dist = hop_distances(g, rho);
  HolderFit fit;
  for (std::size_t ti = 0; ti < Ts.size(); ++ti) {
    const double T = Ts[ti];
    const double scale = std::pow(T, 1.0 / kappa);
    double mass = 0.0;
    for (VertexId y = 0; y < g.num_vertices(); ++y) {
      if (static_cast<double>(dist[y]) < scale / 4.0) mass += g.vertex_weight(y);
    }
    for (double R : Rs) {
      double sup = 0.0;
      for (VertexId y = 0; y < g.num_vertices(); ++y) {
        if (static_cast<double>(dist[y]) < R) sup = std::max(sup, std::abs(rows[ti][rho] - rows[ti][y]));
      }
      fit.points.push_back({R, T, R / scale, sup * mass});
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& p : fit.points) {
    if (p.value <= 0.0) continue;
    const double lx = std::log(p.x), ly = std::log(p.value);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double den = static_cast<double>(n) * sxx - sx * sx;
  require(n >= 2 && den > 0.0, ErrorKind::InvalidArgument,
          "Holder fit needs at least two distinct positive grid points");
  fit.theta = (static_cast<double>(n) * sxy - sx * sy) / den;
  fit.c = std::exp((sy - fit.theta * sx) / static_cast<double>(n));
  return fit;
}

double phi_threshold(const WeightedGraph& g, VertexId x, const std::vector<double>& Rs,
                     double kappa, double cap, std::size_t workers) {
  std::vector<double> sorted = Rs;
  std::sort(sorted.begin(), sorted.end());
  double threshold = 0.0;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    const auto T = static_cast<std::size_t>(std::floor(std::pow(*it, kappa)));
    const PhiResult r = phi_constant(g, Cylinder(g, x, *it, T), workers);
    if (r.infinite || r.value > cap) break;
    threshold = *it;
  }
  return threshold;
}

}  // namespace walklab
