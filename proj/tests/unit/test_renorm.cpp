#include <Eigen/Dense>

#include "doctest.h"
#include "fixtures.hpp"
#include "walklab/error.hpp"
#include "walklab/ifs.hpp"
#include "walklab/renorm.hpp"
#include "walklab/rng.hpp"
#include "walklab/weights.hpp"

using namespace walklab;

namespace {

// Minimal extension energy of boundary data f on B, by solving the interior
// block of the network Laplacian with a dense solver.
double min_extension_energy(const Network& net, const std::vector<VertexId>& B,
                            const std::vector<double>& f) {
  const auto n = static_cast<Eigen::Index>(net.n);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : net.edges) {
    const auto u = static_cast<Eigen::Index>(e.u), v = static_cast<Eigen::Index>(e.v);
    L(u, u) += e.weight;
    L(v, v) += e.weight;
    L(u, v) -= e.weight;
    L(v, u) -= e.weight;
  }
  std::vector<int> pos(net.n, -1);
  for (std::size_t i = 0; i < B.size(); ++i) pos[B[i]] = static_cast<int>(i);
  std::vector<Eigen::Index> inner;
  for (std::size_t v = 0; v < net.n; ++v)
    if (pos[v] < 0) inner.push_back(static_cast<Eigen::Index>(v));
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < B.size(); ++i) g(static_cast<Eigen::Index>(B[i])) = f[i];
  if (!inner.empty()) {
    const auto k = static_cast<Eigen::Index>(inner.size());
    Eigen::MatrixXd A(k, k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) A(i, j) = L(inner[i], inner[j]);
      for (std::size_t b = 0; b < B.size(); ++b) rhs(i) -= L(inner[i], static_cast<Eigen::Index>(B[b])) * f[b];
    }
    const Eigen::VectorXd x = A.ldlt().solve(rhs);
    for (Eigen::Index i = 0; i < k; ++i) g(inner[i]) = x(i);
  }
  return g.dot(L * g);
}

Network path_network() { return Network{3, {{0, 1, 1.0}, {1, 2, 1.0}}}; }

}  // namespace

TEST_SUITE("renorm") {

TEST_CASE("replication") {
  const auto gasket = replicate(sierpinski_gasket(), ConductanceSet::uniform(3));
  CHECK(gasket.n == 6);
  CHECK(gasket.edges.size() == 9);
  const auto vicsek = replicate(vicsek_cross(), ConductanceSet::uniform(4));
  CHECK(vicsek.n == 16);
  CHECK(vicsek.edges.size() == 30);
  for (const auto& e : vicsek.edges) CHECK(e.weight == 1.0);
}

TEST_CASE("trace examples") {
  const auto series = trace_to(path_network(), {0, 2});
  CHECK(series.C(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  const auto same = trace_to(path_network(), {0, 1, 2});
  CHECK(same.C(0, 1) == doctest::Approx(1.0));
  CHECK(same.C(1, 2) == doctest::Approx(1.0));
  CHECK(std::abs(same.C(0, 2)) < 1e-15);
  const auto g = renormalize(sierpinski_gasket(), ConductanceSet::uniform(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(g.C(i, j) == doctest::Approx(0.6).epsilon(1e-13));
}

TEST_CASE("trace is the minimal extension energy and is idempotent") {
  CounterRng rng(5);
  const auto pf = build_prefractal_cells(vicsek_cross(), 2);
  const auto law = WeightLaw{WeightLaw::Kind::cell_symmetric, 1.0, 2.0, 4};
  const auto net = replicate_cells(pf, draw_cell_conductances(vicsek_cross(), law, 2));
  const std::vector<VertexId> B{pf.boundary.begin(), pf.boundary.end()};
  const auto tr = trace_to(net, B);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> f(B.size());
    for (auto& v : f) v = rng.uniform(-1, 1);
    CHECK(fx::close(tr.energy(f), min_extension_energy(net, B, f), 1e-10));
  }
  Network small{B.size(), {}};
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = i + 1; j < B.size(); ++j) small.edges.push_back({i, j, tr.C(i, j)});
  std::vector<VertexId> all(B.size());
  for (std::size_t i = 0; i < B.size(); ++i) all[i] = i;
  const auto again = trace_to(small, all);
  CHECK((again.C - tr.C).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate conductances are rejected") {
  auto c = ConductanceSet::uniform(4);
  c.C(0, 1) = c.C(1, 0) = c.C(0, 2) = c.C(2, 0) = c.C(0, 3) = c.C(3, 0) = 0.0;
  CHECK_THROWS_AS(validate_conductance(c), Error);
  CHECK_THROWS_AS(lambda_fixed_point(vicsek_cross(), c), Error);
  auto asym = ConductanceSet::uniform(3);
  asym.C(0, 1) = 2.0;
  CHECK_THROWS_AS(validate_conductance(asym), Error);
}

TEST_CASE("fixed points") {
  const auto g = lambda_fixed_point(sierpinski_gasket(), ConductanceSet::uniform(3));
  // Hand Schur complement on the 6-vertex network gives 3/5 per pair.
  CHECK(std::abs(g.lambda - 5.0 / 3.0) < 1e-10);
  const auto v = lambda_fixed_point(vicsek_cross(), ConductanceSet::uniform(4));
  CHECK(std::abs(v.lambda - 3.0) < 1e-10);
  CHECK(g.lambda > 1.0);
}

TEST_CASE("lambda does not depend on the start") {
  CounterRng rng(31);
  for (const auto& ifs : {sierpinski_gasket(), vicsek_cross()}) {
    const std::size_t m = ifs.v0.size();
    const double ref = lambda_fixed_point(ifs, ConductanceSet::uniform(m)).lambda;
    for (int s = 0; s < 10; ++s) {
      std::vector<double> vals(m * (m - 1) / 2);
      for (auto& x : vals) x = rng.uniform(0.1, 1.0);
      auto c = ConductanceSet::from_pairs(m, vals);
      CHECK(std::abs(lambda_fixed_point(ifs, c).lambda - ref) < 1e-8);
      c.C *= 7.5;
      CHECK(std::abs(lambda_fixed_point(ifs, c).lambda - ref) < 1e-8);
    }
  }
}

TEST_CASE("homogenization") {
  const auto gasket = sierpinski_gasket();
  const double lam = 5.0 / 3.0;
  const WeightLaw one{WeightLaw::Kind::constant, 1.0, 1.0, 0};
  const auto fixed = homogenize(gasket, one, 3, {1, 2, 3}, lam);
  for (const auto& s : fixed)
    for (double v : s.value.pair_values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_entry_sd(fixed) < 1e-12);

  const WeightLaw law{WeightLaw::Kind::cell_symmetric, 1.0, 2.0, 0};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    WeightLaw l = law;
    l.seed = seed;
    const auto a = homogenize_one(gasket, l, 3, lam, TraceMode::nested);
    const auto b = homogenize_one(gasket, l, 3, lam, TraceMode::direct);
    CHECK((a.C - b.C).cwiseAbs().maxCoeff() < 1e-12);
  }

  std::vector<std::uint64_t> seeds(200);
  for (std::uint64_t i = 0; i < 200; ++i) seeds[i] = i;
  const auto vicsek = vicsek_cross();
  std::vector<double> sd;
  for (std::size_t n = 1; n <= 3; ++n) sd.push_back(max_entry_sd(homogenize(vicsek, law, n, seeds, 3.0)));
  CHECK(sd[1] < sd[0]);
  CHECK(sd[2] < sd[1]);

  // Gasket, levels 1 and 2: sample means of the (0,1) entry within 3 sigma.
  const auto s1 = homogenize(gasket, law, 1, seeds, lam);
  const auto s2 = homogenize(gasket, law, 2, seeds, lam);
  auto stats = [](const std::vector<HomogenizeSample>& s) {
    double m = 0, q = 0;
    for (const auto& x : s) m += x.value.C(0, 1);
    m /= s.size();
    for (const auto& x : s) q += (x.value.C(0, 1) - m) * (x.value.C(0, 1) - m);
    return std::pair{m, std::sqrt(q / (s.size() - 1))};
  };
  const auto [m1, d1] = stats(s1);
  const auto [m2, d2] = stats(s2);
  CHECK(std::abs(m1 - m2) <= 3.0 * std::sqrt(d1 * d1 / 200 + d2 * d2 / 200));
}

TEST_CASE("exponents") {
  const auto v = exponents(5, 3, 3, 3);
  CHECK(v.d_f == doctest::Approx(std::log(5.0) / std::log(3.0)));
  CHECK(v.d_w == doctest::Approx(std::log(15.0) / std::log(3.0)));
  CHECK(v.kappa == doctest::Approx(1.0));
  CHECK(v.d_w == doctest::Approx(v.d_f + v.kappa));
  const auto g = exponents(3, 2, 5.0 / 3.0, 2);
  CHECK(g.d_w == doctest::Approx(std::log(5.0) / std::log(2.0)));
  CHECK(g.d_w == doctest::Approx(2.3219).epsilon(1e-4));
  CHECK_THROWS_AS(exponents(3, 2, 1.0, 2), Error);
}

}
