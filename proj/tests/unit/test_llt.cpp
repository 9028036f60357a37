#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "walklab/error.hpp"
#include "walklab/ifs.hpp"
#include "walklab/kernels.hpp"
#include "walklab/llt.hpp"

using namespace walklab;

TEST_SUITE("llt") {

TEST_CASE("scaling triples") {
  const auto t = scaling_for(Family::tree, 100, {});
  CHECK(t.alpha == doctest::Approx(10.0));
  CHECK(t.beta == doctest::Approx(200.0));
  CHECK(t.gamma == doctest::Approx(1000.0));

  const auto l = scaling_for(Family::lattice, 64, {});
  CHECK(l.alpha == doctest::Approx(8.0));
  CHECK(l.beta == doctest::Approx(16.0));
  CHECK(l.gamma == doctest::Approx(64.0));
  CHECK(l.c1 == 1.0);
  CHECK(l.c2 == 2.0);

  ScalingParams vp;
  vp.N = 5;
  vp.L = 3;
  vp.lambda = 3;
  const auto v = scaling_for(Family::nested, 2, vp);
  CHECK(v.alpha == doctest::Approx(9.0));
  CHECK(v.beta == doctest::Approx(25.0));
  CHECK(v.gamma == doctest::Approx(225.0));
  vp.lambda = 0;
  CHECK_THROWS_AS(scaling_for(Family::nested, 2, vp), Error);
  ScalingParams cp;
  cp.N = 8;
  cp.L = 3;
  CHECK_THROWS_AS(scaling_for(Family::carpet, 2, cp), Error);
}

TEST_CASE("gaussian reference") {
  const std::vector<double> zero{0.0};
  CHECK(gaussian_reference(1, 1.0, 1.0, zero) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  const std::vector<double> far{60.0};
  CHECK(gaussian_reference(1, 1.0, 1.0, far) < 1e-300);
  double s = 0.0;
  const double h = 1e-3;
  for (double x = -10; x <= 10; x += h) {
    const std::vector<double> p{x};
    s += gaussian_reference(1, 0.7, 1.3, p) * h;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("times below one step use q_0") {
  const auto g = build_lattice_box(1, 10);
  const auto s = scaling_for(Family::lattice, 16, {});
  const auto k = rescale_kernel_vertices(g, s, {0.01}, {g.root()});
  const auto q = smoothed_table(g, g.root(), 1);
  CHECK(k.values[0][0] == doctest::Approx(s.beta * q(0, g.root())));
}

TEST_CASE("lattice kernel at n = 4096 matches the Gaussian") {
  const std::size_t n = 4096;
  const auto g = build_lattice_box(1, n + 2);
  const auto s = scaling_for(Family::lattice, static_cast<double>(n), {});
  const std::vector<double> x{0.0};
  const auto k = rescale_kernel(g, s, {1.0}, x);
  CHECK(std::abs(k.values[0][0] - 1.0 / std::sqrt(2.0 * std::numbers::pi)) < 0.02);
  CHECK(sup_distance(k, k) == 0.0);
}

TEST_CASE("lattice sup distance shrinks with n") {
  const auto grid = geometric_grid(0.5, 2.0, 16);
  CHECK(grid.size() == 16);
  CHECK(grid.front() == doctest::Approx(0.5));
  CHECK(grid.back() == doctest::Approx(2.0));
  const auto pts = cube_grid(1, 1.0, 1.0 / 64);
  double prev = 1e300;
  for (std::size_t k = 6; k <= 9; ++k) {
    const double n = std::pow(2.0, k);
    const auto g = build_lattice_box(1, static_cast<std::size_t>(2 * n) + 2);
    const auto s = scaling_for(Family::lattice, n, {});
    const auto f = rescale_kernel(g, s, grid, pts);
    const double d = sup_distance(f, pts, 1, [&](double t, std::span<const double> x) {
      return gaussian_reference(1, s.c1, t, x);
    });
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("tightness at delta 0 and lattice metric comparability") {
  const auto g = build_lattice_box(1, 40);
  const auto s = scaling_for(Family::lattice, 16, {});
  const auto prof = tightness_profile(g, s, {0.5, 1.0}, 1.0, {0.0, 0.25, 0.5});
  REQUIRE(prof.size() == 3);
  CHECK(prof[0].value == 0.0);
  CHECK(prof[1].value <= prof[2].value);

  const auto c = metric_comparability(g, s, 2.0);
  CHECK(c.c1_hat == doctest::Approx(1.0));
  CHECK(c.c2_hat == doctest::Approx(1.0));
  CHECK(std::abs(c.alpha_tilde) < 1e-9);
}

TEST_CASE("lattice measure of a ball tends to 2r") {
  std::vector<double> prev;
  for (double n : {16.0, 64.0, 256.0}) {
    const auto g = build_lattice_box(1, static_cast<std::size_t>(3 * std::sqrt(n)) + 4);
    const auto s = scaling_for(Family::lattice, n, {});
    const auto rows = measure_convergence(g, s, {0.0}, {1.0});
    CHECK(std::abs(rows[0].value - 2.0) <= 2.0 / std::sqrt(n) + 1e-12);
  }
}

TEST_CASE("einstein ratios") {
  ScalingParams vp;
  vp.N = 5;
  vp.L = 3;
  vp.lambda = 3;
  std::vector<ScalingTriple> vt;
  for (int n = 1; n <= 6; ++n) vt.push_back(scaling_for(Family::nested, n, vp));
  const auto ve = einstein_check(vt, 1.0);
  CHECK(ve.ratio_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ve.ratio_max == doctest::Approx(1.0).epsilon(1e-12));

  // d = 1: kappa = d_w - d_f = 1 makes alpha^kappa beta / gamma = 2.
  std::vector<ScalingTriple> lt;
  for (double n : {16.0, 256.0, 4096.0}) lt.push_back(scaling_for(Family::lattice, n, {}));
  const auto le = einstein_check(lt, 1.0);
  CHECK(le.ratio_min == doctest::Approx(2.0));
  CHECK(le.ratio_max == doctest::Approx(2.0));
}

TEST_CASE("gasket exit time slope") {
  const auto g = build_prefractal(sierpinski_gasket(), 5);
  const auto f = exit_time_slope(g, g.root(), {2, 4, 8, 16});
  const double dw = std::log(5.0) / std::log(2.0);
  CHECK(std::abs(f.slope - dw) / dw < 0.1);
  const auto [a, b] = loglog_fit({1, 2, 4, 8}, {3, 12, 48, 192});
  CHECK(a == doctest::Approx(2.0));
  CHECK(std::exp(b) == doctest::Approx(3.0));
}

TEST_CASE("ks statistic") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_statistic({1, 2, 3}, {4, 5, 6}) == 1.0);
  CHECK(ks_statistic({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));
}

TEST_CASE("tree law: disjoint seed halves are within the KS null band") {
  const std::size_t m = 200;
  std::vector<std::uint64_t> a(m), b(m);
  for (std::size_t i = 0; i < m; ++i) a[i] = i, b[i] = 100000 + i;
  const auto sa = tree_root_kernel_samples(50, a, {1.0});
  const auto sb = tree_root_kernel_samples(50, b, {1.0});
  CHECK(ks_statistic(sa[0], sb[0]) < 1.36 * std::sqrt(2.0 / m));
  for (double v : sa[0]) CHECK(v > 0.0);
}

}
