#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "walklab/error.hpp"
#include "walklab/graph_io.hpp"
#include "walklab/ifs.hpp"

using namespace walklab;

TEST_SUITE("graph-core") {

TEST_CASE("node measure on hand graphs") {
  CHECK(node_measure(fx::two_vertex()).mass == std::vector<double>{1, 1});
  CHECK(node_measure(fx::path3()).mass == std::vector<double>{1, 2, 1});
  CHECK(node_measure(fx::triangle()).mass == std::vector<double>{2, 2, 2});
}

TEST_CASE("total mass is twice the edge weight sum") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_weighted_graph(12, 8, seed);
    double w = 0.0;
    for (const auto& e : g.edges()) w += e.weight;
    CHECK(fx::close(node_measure(g).total(), 2.0 * w));
  }
}

TEST_CASE("node measure is stationary for the walk") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_weighted_graph(15, 10, seed);
    const auto nu = node_measure(g);
    // (nu P)(y) = sum_x nu(x) mu_xy / mu_x
    std::vector<double> nuP(g.num_vertices(), 0.0);
    for (VertexId x = 0; x < g.num_vertices(); ++x) {
      for (const auto& nb : g.neighbors(x)) nuP[nb.to] += nu[x] * nb.weight / g.vertex_weight(x);
    }
    for (VertexId y = 0; y < g.num_vertices(); ++y) CHECK(fx::close(nuP[y], nu[y]));
  }
}

TEST_CASE("isolated vertex is a construction defect") {
  CHECK_THROWS_AS(graph_from_edges(3, {{0, 1, 1.0}}), Error);
  CHECK_THROWS_AS(graph_from_edges(2, {{0, 1, -1.0}}), Error);
}

TEST_CASE("hop metric and balls") {
  const auto p5 = path_graph(5);
  CHECK(hop_metric(p5, 2, 2) == 0);
  CHECK(hop_metric(p5, 0, 4) == 4);
  CHECK(hop_ball(fx::path3(), 1, 2) == std::vector<VertexId>{0, 1, 2});
  CHECK(hop_ball(fx::path3(), 0, 1) == std::vector<VertexId>{0});
}

TEST_CASE("hop metric triangle inequality on sampled triples") {
  const auto g = random_weighted_graph(30, 15, 7);
  std::vector<std::vector<std::size_t>> d;
  for (VertexId x = 0; x < g.num_vertices(); ++x) d.push_back(hop_distances(g, x));
  for (VertexId x = 0; x < 30; ++x)
    for (VertexId y = 0; y < 30; ++y)
      for (VertexId z = 0; z < 30; z += 3) CHECK(d[x][z] <= d[x][y] + d[y][z]);
}

TEST_CASE("nearest vertex") {
  const auto g = fx::path3();
  for (VertexId v = 0; v < 3; ++v) CHECK(nearest_vertex(g, g.coord(v)) == v);
  const std::vector<double> mid{0.5};
  CHECK(nearest_vertex(fx::two_vertex(), mid) == 0);

  const auto gasket = build_prefractal(sierpinski_gasket(), 1);
  const std::vector<std::vector<double>> outside{{-1.0, -1.0}, {5.0, -0.3}, {1.0, 4.0}};
  for (const auto& p : outside) {
    VertexId best = 0;
    double bd = 1e300;
    for (VertexId v = 0; v < gasket.num_vertices(); ++v) {
      const double dv = euclidean_distance(gasket.coord(v), p);
      if (dv < bd) bd = dv, best = v;
    }
    CHECK(nearest_vertex(gasket, p) == best);
    CHECK(gasket.degree(best) == 2);  // a corner of the level-1 gasket
  }
}

TEST_CASE("json round trip keeps exact coordinates and weights") {
  const auto g = build_prefractal(vicsek_cross(), 1);
  const auto back = graph_from_json(nlohmann::json::parse(graph_to_json(g).dump()));
  CHECK(graph_to_json(back).dump() == graph_to_json(g).dump());
  REQUIRE(back.has_exact_coords());
  for (VertexId v = 0; v < g.num_vertices(); ++v) CHECK(back.exact_coord(v) == g.exact_coord(v));

  const auto r = random_weighted_graph(10, 5, 3);
  const auto rb = graph_from_json(nlohmann::json::parse(graph_to_json(r).dump()));
  for (std::size_t i = 0; i < r.num_edges(); ++i) CHECK(rb.edges()[i].weight == r.edges()[i].weight);
}

}
