#include "walklab/carpet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "walklab/error.hpp"

namespace walklab {

namespace {

using Cell = std::vector<int>;

bool face_connected(const std::set<Cell>& cells) {
  if (cells.empty()) return true;
  std::set<Cell> seen{*cells.begin()};
  std::deque<Cell> queue{*cells.begin()};
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (int s : {-1, 1}) {
        Cell nb = c;
        nb[i] += s;
        if (cells.count(nb) && seen.insert(nb).second) queue.push_back(nb);
      }
    }
  }
  return seen.size() == cells.size();
}

// All cells of the level-n pre-carpet on the grid {0..L^n-1}^d.
std::vector<Cell> level_cells(const CarpetGenerator& gen, std::size_t level) {
  std::vector<Cell> cells{Cell(gen.dim, 0)};
  for (std::size_t l = 0; l < level; ++l) {
    std::vector<Cell> next;
    next.reserve(cells.size() * gen.N());
    for (const auto& g : gen.cells) {
      for (const auto& c : cells) {
        Cell x(gen.dim);
        for (std::size_t i = 0; i < gen.dim; ++i) {
          x[i] = g[i] * static_cast<int>(std::pow(gen.L, l)) + c[i];
        }
        next.push_back(std::move(x));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

// Every 2^d window of grid cells: if the occupied part is nonempty its
// interior must be connected, i.e. the occupied cells are face-connected.
bool windows_ok(const std::set<Cell>& cells, std::size_t dim, int side) {
  Cell corner(dim, 0);
  while (true) {
    std::set<Cell> inside;
    const std::size_t combos = std::size_t{1} << dim;
    for (std::size_t m = 0; m < combos; ++m) {
      Cell c = corner;
      for (std::size_t i = 0; i < dim; ++i) c[i] += static_cast<int>((m >> i) & 1U);
      if (cells.count(c)) inside.insert(c);
    }
    if (!face_connected(inside)) return false;
    std::size_t i = 0;
    while (i < dim && ++corner[i] > side - 2) corner[i++] = 0;
    if (i == dim) return true;
  }
}

}  // namespace

CarpetGenerator standard_carpet() {
  CarpetGenerator g;
  g.dim = 2;
  g.L = 3;
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) {
      if (x != 1 || y != 1) g.cells.push_back({x, y});
    }
  }
  return g;
}

CarpetGenerator full_cube_generator(std::size_t dim, std::size_t L) {
  CarpetGenerator g;
  g.dim = dim;
  g.L = L;
  Cell c(dim, 0);
  while (true) {
    g.cells.push_back(c);
    std::size_t i = 0;
    while (i < dim && ++c[i] >= static_cast<int>(L)) c[i++] = 0;
    if (i == dim) break;
  }
  return g;
}

CarpetGenerator carpet_from_json(const nlohmann::json& j) {
  try {
    CarpetGenerator g;
    g.dim = j.at("dim").get<std::size_t>();
    g.L = j.at("L").get<std::size_t>();
    g.cells = j.at("cells").get<std::vector<std::vector<int>>>();
    return g;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed carpet JSON: ") + e.what());
  }
}

nlohmann::ordered_json carpet_to_json(const CarpetGenerator& gen) {
  nlohmann::ordered_json j;
  j["dim"] = gen.dim;
  j["L"] = gen.L;
  j["cells"] = gen.cells;
  return j;
}

std::vector<std::string> check_carpet_generator(const CarpetGenerator& gen) {
  require(gen.dim >= 2, ErrorKind::InvalidArgument, "carpet needs d >= 2");
  require(gen.L >= 3, ErrorKind::InvalidArgument, "carpet needs L >= 3");
  const int L = static_cast<int>(gen.L);
  std::set<Cell> cells;
  for (const auto& c : gen.cells) {
    require(c.size() == gen.dim, ErrorKind::InvalidArgument, "cell has wrong dimension");
    for (int x : c) require(x >= 0 && x < L, ErrorKind::InvalidArgument, "cell outside the grid");
    require(cells.insert(c).second, ErrorKind::InvalidArgument, "duplicate cell");
  }
  std::vector<std::string> failed;

  // Symmetry: invariant under each axis reflection and each adjacent swap,
  // which generate the symmetry group of the cube.
  bool sym = true;
  for (const auto& c : cells) {
    for (std::size_t i = 0; i < gen.dim && sym; ++i) {
      Cell r = c;
      r[i] = L - 1 - r[i];
      sym = cells.count(r) > 0;
      if (sym && i + 1 < gen.dim) {
        Cell s = c;
        std::swap(s[i], s[i + 1]);
        sym = cells.count(s) > 0;
      }
    }
  }
  if (!sym) failed.emplace_back("Symmetry");

  if (!face_connected(cells)) failed.emplace_back("Connectedness");

  bool nondiag = windows_ok(cells, gen.dim, L);
  if (nondiag && gen.N() <= 4096) {
    const auto l2 = level_cells(gen, 2);
    nondiag = windows_ok(std::set<Cell>(l2.begin(), l2.end()), gen.dim, L * L);
  }
  if (!nondiag) failed.emplace_back("Non-diagonality");

  bool border = true;
  for (int x = 0; x < L; ++x) {
    Cell c(gen.dim, 0);
    c[0] = x;
    border = border && cells.count(c) > 0;
  }
  if (!border) failed.emplace_back("Borders-included");
  return failed;
}

std::size_t carpet_face_count(const CarpetGenerator& gen) {
  return static_cast<std::size_t>(
      std::count_if(gen.cells.begin(), gen.cells.end(), [](const Cell& c) { return c[0] == 0; }));
}

WeightedGraph build_carpet(const CarpetGenerator& gen, std::size_t level) {
  const auto failed = check_carpet_generator(gen);
  if (!failed.empty()) {
    std::string msg = "carpet generator fails:";
    for (std::size_t i = 0; i < failed.size(); ++i) msg += (i ? ", " : " ") + failed[i];
    fail(ErrorKind::GeneratorDefect, msg);
  }
  require(std::pow(static_cast<double>(gen.N()), static_cast<double>(level)) <= 4e6,
          ErrorKind::Capacity, "carpet level too large (limit 4e6 cubes)");
  auto cells = level_cells(gen, level);
  std::sort(cells.begin(), cells.end());
  std::map<Cell, VertexId> index;
  WeightedGraph::Parts p;
  p.dim = gen.dim;
  for (const auto& c : cells) {
    index.emplace(c, index.size());
    for (int x : c) p.coords.push_back(static_cast<double>(x));
  }
  p.num_vertices = cells.size();
  for (const auto& c : cells) {
    const VertexId a = index.at(c);
    for (std::size_t i = 0; i < gen.dim; ++i) {
      Cell nb = c;
      nb[i] += 1;
      const auto it = index.find(nb);
      if (it != index.end()) p.edges.push_back({a, it->second, 1.0});
    }
  }
  p.root = index.at(Cell(gen.dim, 0));
  return WeightedGraph(std::move(p));
}

}  // namespace walklab
