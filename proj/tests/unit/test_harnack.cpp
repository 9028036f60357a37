#include "doctest.h"
#include "fixtures.hpp"
#include "walklab/error.hpp"
#include "walklab/harnack.hpp"
#include "walklab/ifs.hpp"
#include "walklab/rng.hpp"

using namespace walklab;

TEST_SUITE("harnack") {

TEST_CASE("cylinder shape") {
  const auto g = path_graph(21);
  const Cylinder c(g, 10, 4, 16);
  CHECK(c.interior().size() == 7);
  CHECK(c.closure().size() == 9);
  CHECK(c.ring().size() == 2);
  CHECK(c.half_ball().size() == 3);
  CHECK(c.minus_first() == 4);
  CHECK(c.minus_last() == 8);
  CHECK(c.plus_first() == 12);
  CHECK(c.plus_last() == 15);
  CHECK_THROWS_AS(Cylinder(g, 10, 1, 16), Error);
  CHECK_THROWS_AS(Cylinder(g, 10, 4, 3), Error);
}

TEST_CASE("constants are caloric") {
  const auto g = build_prefractal(sierpinski_gasket(), 2);
  const Cylinder c(g, 0, 3, 12);
  const std::vector<double> init(c.closure().size(), 1.0);
  const std::vector<std::vector<double>> lat(12, std::vector<double>(c.ring().size(), 1.0));
  const auto f = caloric_evolve(g, c, init, lat);
  for (const auto& row : f.u)
    for (double v : row) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(caloric_evolve(g, c, std::vector<double>(2, 1.0), lat), Error);
}

TEST_CASE("two-vertex graph alternates and u-hat is constant") {
  const auto g = fx::two_vertex();
  const Cylinder c(g, 0, 2, 4);
  CHECK(c.ring().empty());
  const auto f = caloric_evolve(g, c, {1.0, 0.0}, std::vector<std::vector<double>>(4));
  for (std::size_t n = 0; n < 4; ++n) {
    CHECK(f.u[n][c.local(0)] == (n % 2 == 0 ? 1.0 : 0.0));
    for (std::size_t i = 0; i < 2; ++i) CHECK(f.hat(n, i) == 1.0);
  }
  const auto phi = phi_constant(g, c);
  CHECK_FALSE(phi.infinite);
  CHECK(phi.value == 1.0);
}

TEST_CASE("heat equation residual on random data") {
  CounterRng rng(12);
  const auto g = random_weighted_graph(20, 12, 6);
  const Cylinder c(g, 0, 2, 10);
  std::vector<double> init(c.closure().size());
  for (auto& v : init) v = rng.uniform(-1, 1);
  std::vector<std::vector<double>> lat(10, std::vector<double>(c.ring().size()));
  for (auto& row : lat)
    for (auto& v : row) v = rng.uniform(-1, 1);
  const auto f = caloric_evolve(g, c, init, lat);
  CHECK(caloric_residual(g, c, f) < 1e-12);
}

TEST_CASE("phi constant is an upper bound for random data") {
  const auto g = path_graph(7);
  const Cylinder c(g, 3, 2, 8);
  const auto phi = phi_constant(g, c);
  CHECK_FALSE(phi.infinite);
  CHECK(phi.value == doctest::Approx(8.0));
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 5000; ++t) worst = std::max(worst, random_data_ratio(g, c, 1, t));
  CHECK(worst <= phi.value * (1 + 1e-12));
  CHECK(worst > 1.0);

  const auto gasket = build_prefractal(sierpinski_gasket(), 3);
  const Cylinder cg(gasket, 0, 4, 24);
  const auto pg = phi_constant(gasket, cg);
  REQUIRE_FALSE(pg.infinite);
  for (std::uint64_t t = 0; t < 1000; ++t) CHECK(random_data_ratio(gasket, cg, 2, t) <= pg.value * (1 + 1e-12));
}

TEST_CASE("generated fields stay nonnegative") {
  const auto g = build_prefractal(sierpinski_gasket(), 2);
  const Cylinder c(g, 0, 3, 10);
  for (std::size_t i = 0; i < c.closure().size(); ++i) {
    std::vector<double> init(c.closure().size(), 0.0);
    init[i] = 1.0;
    const auto f = caloric_evolve(g, c, init, std::vector<std::vector<double>>(10, std::vector<double>(c.ring().size())));
    for (const auto& row : f.u)
      for (double v : row) CHECK(v >= 0.0);
  }
}

TEST_CASE("short horizon gives an infinite constant") {
  const auto g = path_graph(41);
  const Cylinder c(g, 20, 12, 4);
  const auto phi = phi_constant(g, c);
  CHECK(phi.infinite);
}

TEST_CASE("oscillation decay") {
  const auto two = oscillation_decay_check(fx::two_vertex(), 0, 2.0, 2.0);
  for (const auto& s : two.steps) CHECK(s.osc_q == doctest::Approx(0.0));
  CHECK(two.ok());

  const auto z = build_lattice_box(1, 300);
  const auto rz = oscillation_decay_check(z, z.root(), 16.0, 2.0);
  CHECK(rz.ok());
  CHECK(std::isfinite(rz.c_h));
  CHECK(rz.steps.size() >= 3);
}

TEST_CASE("holder fit") {
  const auto z = build_lattice_box(1, 200);
  CHECK_THROWS_AS(holder_ratio(z, z.root(), {8.0}, {100.0}, 2.0), Error);
  const auto fz = holder_ratio(z, z.root(), {1, 2, 3, 4}, {256, 400, 900}, 2.0);
  CHECK(fz.theta > 0.0);
  CHECK(fz.theta >= 1.5);
  CHECK(fz.theta <= 2.5);

  const auto gasket = build_prefractal(sierpinski_gasket(), 4);
  const double kappa = std::log(5.0) / std::log(2.0);
  const auto fg = holder_ratio(gasket, gasket.root(), {2, 3}, {400, 600}, kappa);
  CHECK(fg.theta > 0.0);
  MESSAGE("gasket holder exponent " << fg.theta);
}

}
