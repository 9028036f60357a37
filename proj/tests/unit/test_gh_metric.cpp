#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "walklab/error.hpp"
#include "walklab/gh_metric.hpp"
#include "walklab/llt.hpp"
#include "walklab/tree.hpp"

using namespace walklab;

namespace {

// Minimum of delta over every subset of a x b that is a root-respecting
// correspondence.
double brute_force_delta(const PointedKernelSpace& a, const PointedKernelSpace& b) {
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t x = 0; x < a.size; ++x)
    for (std::size_t y = 0; y < b.size; ++y) all.emplace_back(x, y);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << all.size()); ++mask) {
    Correspondence c;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (mask >> i & 1) c.push_back(all[i]);
    if (!is_correspondence(a, b, c)) continue;
    best = std::min(best, delta_of(a, b, c));
  }
  return best;
}

PointedKernelSpace two_point(double gap) {
  PointedKernelSpace s;
  s.size = 2;
  s.metric = {0, gap, gap, 0};
  s.t_grid = {1.0};
  s.curves = {{0.0}, {0.0}};
  return s;
}

}  // namespace

TEST_SUITE("gh-metric") {

TEST_CASE("distortion examples") {
  const auto a = random_space(4, 3, 1);
  Correspondence id;
  for (std::size_t i = 0; i < 4; ++i) id.emplace_back(i, i);
  CHECK(distortion(a, a, id) == 0.0);
  const auto one = random_space(1, 3, 2);
  CHECK(distortion(one, one, {{0, 0}}) == 0.0);
  const Correspondence full{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(distortion(two_point(1), two_point(3), full) == doctest::Approx(3.0));
  CHECK(distortion(two_point(1), two_point(3), {{0, 0}, {1, 1}}) == doctest::Approx(2.0));
}

TEST_CASE("trivial deltas") {
  const auto a = random_space(4, 3, 5);
  const auto r = delta_distance(a, a, DeltaMode::exact);
  CHECK(r.value == 0.0);
  Correspondence id;
  for (std::size_t i = 0; i < 4; ++i) id.emplace_back(i, i);
  CHECK(r.witness == id);

  const auto f = random_space(1, 5, 6);
  const auto g = random_space(1, 5, 7);
  double sup = 0.0;
  for (std::size_t i = 0; i < 5; ++i) sup = std::max(sup, std::abs(f.curves[0][i] - g.curves[0][i]));
  CHECK(delta_distance(f, g, DeltaMode::exact).value == sup);
  CHECK(delta_distance(f, g, DeltaMode::heuristic).value == sup);
}

TEST_CASE("exact solver matches brute force over all subsets") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t na = 1 + seed % 3, nb = 1 + (seed / 3) % 4;
    const auto a = random_space(na, 3, 1000 + seed);
    const auto b = random_space(nb, 3, 2000 + seed);
    const auto r = delta_distance(a, b, DeltaMode::exact);
    CHECK(is_correspondence(a, b, r.witness));
    CHECK(delta_of(a, b, r.witness) == doctest::Approx(r.value).epsilon(1e-15));
    CHECK(r.value == doctest::Approx(brute_force_delta(a, b)).epsilon(1e-15));
  }
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto a = random_space(4, 2, 3000 + seed);
    const auto b = random_space(4, 2, 4000 + seed);
    CHECK(delta_distance(a, b, DeltaMode::exact).value == doctest::Approx(brute_force_delta(a, b)).epsilon(1e-15));
  }
}

TEST_CASE("heuristic is an upper bound") {
  std::size_t equal = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto a = random_space(1 + seed % 4, 3, 5000 + seed);
    const auto b = random_space(1 + (seed / 4) % 4, 3, 6000 + seed);
    const double e = delta_distance(a, b, DeltaMode::exact).value;
    const auto h = delta_distance(a, b, DeltaMode::heuristic);
    CHECK(is_correspondence(a, b, h.witness));
    CHECK(h.value >= e);
    if (h.value == e) ++equal;
  }
  CHECK(equal >= 180);
}

TEST_CASE("zero exactly on isometric copies") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto a = random_space(5, 3, 7000 + seed);
    std::vector<std::size_t> perm{0, 1, 2, 3, 4};
    std::rotate(perm.begin() + 1, perm.begin() + 1 + seed % 4, perm.end());
    const auto b = permute_space(a, perm);
    CHECK(delta_distance(a, b, DeltaMode::exact).value == doctest::Approx(0.0));
    auto c = b;
    c.curves[perm[2]][0] += 0.25;
    CHECK(delta_distance(a, c, DeltaMode::exact).value > 0.0);
  }
}

TEST_CASE("axioms on small random spaces") {
  const auto r = metric_axiom_suite(60, 17);
  CHECK(r.samples == 60);
  CHECK(r.max_asymmetry <= 1e-9);
  CHECK(r.max_self_distance <= 1e-9);
  CHECK(r.triangle_violations == 0);
  CHECK(r.isometric_copy_failures == 0);
  CHECK(r.ok());
}

TEST_CASE("exact mode size cap and json round trip") {
  const auto a = random_space(7, 2, 1);
  const auto b = random_space(6, 2, 2);
  try {
    delta_distance(a, b, DeltaMode::exact);
    FAIL("cap not enforced");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Capacity);
  }
  CHECK(delta_distance(a, b, DeltaMode::heuristic).value >= 0.0);
  const auto back = space_from_json(space_to_json(a));
  CHECK(back.metric == a.metric);
  CHECK(back.curves == a.curves);
  CHECK(back.root == a.root);
  auto bad = a;
  bad.metric[1] = -1.0;
  CHECK_THROWS_AS(validate_space(bad), Error);
}

TEST_CASE("kernel space of a tree uses the hop metric over alpha") {
  const auto t = tree_to_graph(sample_uniform_tree(30, 3));
  const auto s = scaling_for(Family::tree, 30, {});
  const auto k = kernel_space_from_graph(t, s, {0.5, 1.0});
  CHECK(k.size == 30);
  for (std::size_t x = 0; x < 30; ++x) {
    const auto d = hop_distances(t, x);
    for (std::size_t y = 0; y < 30; ++y) CHECK(k.d(x, y) == doctest::Approx(static_cast<double>(d[y]) / s.alpha));
  }
  validate_space(k);
}

}
