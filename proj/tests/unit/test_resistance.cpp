#include "doctest.h"
#include "fixtures.hpp"
#include "walklab/error.hpp"
#include "walklab/ifs.hpp"
#include "walklab/resistance.hpp"
#include "walklab/rng.hpp"
#include "walklab/tree.hpp"

using namespace walklab;

TEST_SUITE("resistance") {

TEST_CASE("dirichlet energy by hand") {
  CHECK(dirichlet_energy(fx::path3(), std::vector<double>{5, 5, 5}) == 0.0);
  CHECK(dirichlet_energy(fx::two_vertex(), std::vector<double>{0, 1}) == 1.0);
  CHECK(dirichlet_energy(fx::path3(), std::vector<double>{0, 1, 2}) == 2.0);
}

TEST_CASE("sum form equals the generator form") {
  CounterRng rng(3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = random_weighted_graph(20, 15, seed);
    std::vector<double> f(20);
    for (auto& v : f) v = rng.uniform(-1, 1);
    CHECK(fx::close(dirichlet_energy(g, f), generator_form(g, f), 1e-12));
  }
}

TEST_CASE("series and parallel oracles") {
  CHECK(effective_resistance(fx::path3(), 0, 2).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(effective_resistance(fx::triangle(), 0, 1).value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(effective_resistance(cycle_graph(4), 0, 1).value == doctest::Approx(0.75).epsilon(1e-12));
  // Weighted series: 1/2 + 1/4.
  const auto w = graph_from_edges(3, {{0, 1, 2.0}, {1, 2, 4.0}});
  CHECK(effective_resistance(w, 0, 2).value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(effective_resistance(fx::path3(), 1, 1), Error);
}

TEST_CASE("potential achieves the variational sup and bounds oscillation by R times energy") {
  CounterRng rng(9);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = random_weighted_graph(25, 20, seed);
    const auto sol = effective_resistance(g, 3, 17);
    const double E = dirichlet_energy(g, sol.potential);
    const double gap = sol.potential[3] - sol.potential[17];
    CHECK(fx::close(gap * gap / E, sol.value, 1e-9));
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> f(25);
      for (auto& v : f) v = rng.uniform(-1, 1);
      const double d = f[3] - f[17];
      CHECK(d * d <= sol.value * dirichlet_energy(g, f) * (1 + 1e-12));
    }
  }
}

TEST_CASE("resistance is a metric, bounded by the series comparison") {
  const auto g = random_weighted_graph(18, 12, 21);
  const auto R = all_pairs_resistance(g);
  double wmin = 1e300;
  for (const auto& e : g.edges()) wmin = std::min(wmin, e.weight);
  for (VertexId x = 0; x < 18; ++x) {
    const auto d = hop_distances(g, x);
    for (VertexId y = 0; y < 18; ++y) {
      CHECK(std::abs(R(x, y) - R(y, x)) < 1e-12);
      CHECK(R(x, y) <= static_cast<double>(d[y]) / wmin * (1 + 1e-12));
      for (VertexId z = 0; z < 18; ++z) CHECK(R(x, z) <= R(x, y) + R(y, z) + 1e-12);
    }
  }
}

TEST_CASE("resistance equals hop distance on unit trees") {
  const auto t = tree_to_graph(sample_uniform_tree(80, 4));
  const auto r = resistances_from(t, 0);
  const auto d = hop_distances(t, 0);
  for (VertexId v = 0; v < t.num_vertices(); ++v) CHECK(r[v] == doctest::Approx(static_cast<double>(d[v])).epsilon(1e-11));
}

TEST_CASE("h inverse on the step structure") {
  const auto p = resistance_profile(fx::path3(), 0);
  CHECK(p.radii == std::vector<double>{0, 1, 2});
  CHECK(p.V(0) == 1.0);
  CHECK(p.V(1) == 3.0);
  CHECK(p.V(2) == 4.0);
  CHECK(p.V(0.5) == 1.0);
  CHECK(p.h_inverse(2.0) == doctest::Approx(1.0));
  CHECK(p.h_inverse(0.5) == doctest::Approx(0.5));
  const auto two = resistance_profile(fx::two_vertex(), 0);
  CHECK(two.h_inverse(2.0) == doctest::Approx(1.0));
  CHECK(two.h_inverse(0.25) == doctest::Approx(0.25));
  CHECK(two.h_inverse(4.0) == doctest::Approx(2.0));
}

TEST_CASE("energy chain hand cases") {
  const auto two = verify_energy_chain(fx::two_vertex(), 0, 20);
  CHECK(two.ok());
  const auto path = verify_energy_chain(fx::path3(), 0, 20);
  CHECK(path.ok());
  // q_2(a) = 1/4 <= 3 h^{-1}(1) / 1.
  const auto p = resistance_profile(fx::path3(), 0);
  CHECK(0.25 <= 3.0 * p.h_inverse(1.0));
  CHECK_THROWS_AS(verify_energy_chain(fx::path3(), 0, 1), Error);
}

TEST_CASE("energy identity and bounds on the gasket") {
  const auto g = build_prefractal(sierpinski_gasket(), 3);
  const auto r = verify_energy_chain(g, g.root(), 200);
  CHECK(r.ok());
  CHECK(r.identity_max_rel_error < 1e-10);
  CHECK(r.identity_ratio_min == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r.identity_ratio_max == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("energy identity on random weighted graphs up to m = 500") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = random_weighted_graph(30, 25, seed);
    const auto r = verify_energy_chain(g, g.root(), 500);
    CHECK(r.ok());
    CHECK(r.identity_max_rel_error < 1e-10);
  }
}

TEST_CASE("oscillation bound") {
  const auto x_eq_y = verify_oscillation_bound(fx::path3(), 0, 10, {{1, 1}});
  CHECK(x_eq_y.ok());
  CHECK(verify_oscillation_bound(fx::two_vertex(), 0, 10, {}).ok());
  const auto t = tree_to_graph(sample_uniform_tree(200, 13));
  const auto r = verify_oscillation_bound(t, 0, 500, {});
  CHECK(r.ok());
  CHECK(r.worst_ratio > 0.0);
  CHECK(r.worst_ratio <= 1.0);
}

TEST_CASE("a corrupted kernel violates the oscillation bound") {
  const auto g = build_prefractal(sierpinski_gasket(), 2);
  KernelTable q = smoothed_table(g, g.root(), 60);
  q.rows[40][5] += 1.0;
  const auto r = verify_oscillation_bound(g, g.root(), 60, {}, &q);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations.front().inequality == "oscillation_bound");
  CHECK(r.violations.front().m == 40);
}

}
