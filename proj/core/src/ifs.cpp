#include "walklab/ifs.hpp"

#include <cmath>
#include <algorithm>
#include <map>
#include <optional>

#include "walklab/error.hpp"
#include "walklab/rng.hpp"

namespace walklab {

namespace {

std::vector<double> to_double(const std::vector<Rational>& r) {
  std::vector<double> out;
  out.reserve(r.size());
  for (const Rational& x : r) out.push_back(boost::rational_cast<double>(x));
  return out;
}

// Fill the float view from the exact data.
void sync_float(IfsSpec& ifs) {
  ifs.v0.clear();
  for (const auto& p : ifs.exact_v0) ifs.v0.push_back(to_double(p));
  ifs.maps.clear();
  for (const auto& m : ifs.exact_maps) ifs.maps.push_back({to_double(m.linear), to_double(m.shift)});
}

std::vector<Rational> identity_rational(std::size_t d) {
  std::vector<Rational> id(d * d, Rational(0));
  for (std::size_t i = 0; i < d; ++i) id[i * d + i] = Rational(1);
  return id;
}

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  require(v.is_number_integer(), ErrorKind::InvalidArgument,
          "exact IFS entries must be integers or \"p/q\" strings");
  return Rational(v.get<std::int64_t>());
}

std::vector<double> apply(const IfsSpec& ifs, const AffineMap& m, const std::vector<double>& x) {
  const std::size_t d = ifs.dim;
  std::vector<double> y(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += m.linear[i * d + j] * x[j];
    y[i] = s / ifs.L + m.shift[i];
  }
  return y;
}

}  // namespace

IfsSpec sierpinski_gasket() {
  IfsSpec s;
  s.name = "sierpinski_gasket";
  s.dim = 2;
  s.L = 2.0;
  // Triangular lattice basis e1 = (1,0), e2 = (1/2, sqrt(3)/2).
  s.basis = {1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0};
  s.exact = true;
  s.exact_v0 = {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  const Rational h(1, 2);
  for (const auto& t : std::vector<RationalPoint>{{0, 0}, {h, 0}, {0, h}}) {
    s.exact_maps.push_back({identity_rational(2), t});
  }
  sync_float(s);
  return s;
}

IfsSpec vicsek_cross() {
  IfsSpec s;
  s.name = "vicsek_cross";
  s.dim = 2;
  s.L = 3.0;
  s.exact = true;
  s.exact_v0 = {{Rational(0), Rational(0)}, {Rational(1), Rational(0)},
                {Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  const Rational a(2, 3);
  const Rational c(1, 3);
  for (const auto& t : std::vector<RationalPoint>{{0, 0}, {a, 0}, {0, a}, {a, a}, {c, c}}) {
    s.exact_maps.push_back({identity_rational(2), t});
  }
  sync_float(s);
  return s;
}

std::vector<double> embed_point(const IfsSpec& ifs, const std::vector<double>& x) {
  if (ifs.basis.empty()) return x;
  const std::size_t d = ifs.dim;
  std::vector<double> y(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) y[i] += ifs.basis[i * d + j] * x[j];
  }
  return y;
}

IfsSpec ifs_from_json(const nlohmann::json& j) {
  try {
    IfsSpec s;
    s.name = j.value("name", std::string("custom"));
    s.dim = j.at("dim").get<std::size_t>();
    s.L = j.at("L").get<double>();
    s.exact = j.value("exact", false);
    if (j.contains("basis")) {
      for (const auto& row : j.at("basis")) {
        for (const auto& v : row) s.basis.push_back(v.get<double>());
      }
      require(s.basis.size() == s.dim * s.dim, ErrorKind::InvalidArgument, "basis must be dim x dim");
    }
    if (s.exact) {
      require(s.L == std::floor(s.L), ErrorKind::InvalidArgument, "exact IFS needs an integer L");
      for (const auto& p : j.at("v0")) {
        RationalPoint q;
        for (const auto& v : p) q.push_back(rational_from_json(v));
        s.exact_v0.push_back(q);
      }
      for (const auto& m : j.at("maps")) {
        ExactAffineMap em;
        if (m.contains("linear")) {
          for (const auto& row : m.at("linear")) {
            for (const auto& v : row) em.linear.push_back(rational_from_json(v));
          }
        } else {
          em.linear = identity_rational(s.dim);
        }
        for (const auto& v : m.at("shift")) em.shift.push_back(rational_from_json(v));
        s.exact_maps.push_back(em);
      }
      sync_float(s);
    } else {
      s.v0 = j.at("v0").get<std::vector<std::vector<double>>>();
      for (const auto& m : j.at("maps")) {
        AffineMap am;
        if (m.contains("linear")) {
          for (const auto& row : m.at("linear")) {
            for (const auto& v : row) am.linear.push_back(v.get<double>());
          }
        } else {
          am.linear.assign(s.dim * s.dim, 0.0);
          for (std::size_t i = 0; i < s.dim; ++i) am.linear[i * s.dim + i] = 1.0;
        }
        am.shift = m.at("shift").get<std::vector<double>>();
        s.maps.push_back(am);
      }
    }
    require(s.dim >= 1, ErrorKind::InvalidArgument, "dim must be positive");
    require(s.L > 1.0, ErrorKind::InvalidArgument, "contraction needs L > 1");
    require(s.v0.size() >= 2, ErrorKind::InvalidArgument, "V_0 needs at least 2 points");
    require(!s.maps.empty(), ErrorKind::InvalidArgument, "IFS needs at least one map");
    for (const auto& p : s.v0) {
      require(p.size() == s.dim, ErrorKind::InvalidArgument, "V_0 point has wrong dimension");
    }
    for (const auto& m : s.maps) {
      require(m.linear.size() == s.dim * s.dim && m.shift.size() == s.dim,
              ErrorKind::InvalidArgument, "map has wrong dimension");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed IFS JSON: ") + e.what());
  }
}

nlohmann::ordered_json ifs_to_json(const IfsSpec& ifs) {
  nlohmann::ordered_json j;
  const std::size_t d = ifs.dim;
  auto matrix = [d](const auto& flat, auto conv) {
    auto out = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < d; ++i) {
      auto row = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < d; ++k) row.push_back(conv(flat[i * d + k]));
      out.push_back(row);
    }
    return out;
  };
  auto fmt = [](const Rational& r) { return format_rational(r); };
  auto same = [](double x) { return x; };
  j["name"] = ifs.name;
  j["dim"] = d;
  j["L"] = ifs.L;
  j["exact"] = ifs.exact;
  if (!ifs.basis.empty()) j["basis"] = matrix(ifs.basis, same);
  auto v0 = nlohmann::ordered_json::array();
  auto maps = nlohmann::ordered_json::array();
  if (ifs.exact) {
    for (const auto& p : ifs.exact_v0) {
      auto row = nlohmann::ordered_json::array();
      for (const auto& r : p) row.push_back(fmt(r));
      v0.push_back(row);
    }
    for (const auto& m : ifs.exact_maps) {
      nlohmann::ordered_json jm;
      jm["linear"] = matrix(m.linear, fmt);
      auto sh = nlohmann::ordered_json::array();
      for (const auto& r : m.shift) sh.push_back(fmt(r));
      jm["shift"] = sh;
      maps.push_back(jm);
    }
  } else {
    for (const auto& p : ifs.v0) v0.push_back(p);
    for (const auto& m : ifs.maps) {
      nlohmann::ordered_json jm;
      jm["linear"] = matrix(m.linear, same);
      jm["shift"] = m.shift;
      maps.push_back(jm);
    }
  }
  j["v0"] = v0;
  j["maps"] = maps;
  return j;
}

void validate_ifs(const IfsSpec& ifs) {
  const std::size_t d = ifs.dim;
  require(ifs.L > 1.0, ErrorKind::GeneratorDefect, "contraction needs L > 1");
  require(ifs.v0.size() >= 2, ErrorKind::GeneratorDefect, "V_0 needs at least 2 points");

  // Similitude check in Euclidean coordinates on V_0 pairs and random pairs.
  std::vector<std::vector<double>> sample = ifs.v0;
  CounterRng rng(0x1f5, d);
  for (int k = 0; k < 8; ++k) {
    std::vector<double> p(d);
    for (auto& x : p) x = rng.uniform(-1.0, 2.0);
    sample.push_back(p);
  }
  for (std::size_t mi = 0; mi < ifs.N(); ++mi) {
    for (std::size_t a = 0; a < sample.size(); ++a) {
      for (std::size_t b = a + 1; b < sample.size(); ++b) {
        const auto ea = embed_point(ifs, sample[a]);
        const auto eb = embed_point(ifs, sample[b]);
        const auto fa = embed_point(ifs, apply(ifs, ifs.maps[mi], sample[a]));
        const auto fb = embed_point(ifs, apply(ifs, ifs.maps[mi], sample[b]));
        const double before = euclidean_distance(ea, eb);
        const double after = euclidean_distance(fa, fb);
        require(std::abs(after - before / ifs.L) <= 1e-9 * (1.0 + before),
                ErrorKind::GeneratorDefect,
                "map " + std::to_string(mi) + " is not an L^-1 similitude");
      }
    }
  }

  // Ramification: build level 2 and check that distinct level-1 cells meet
  // only in points that lie in both cells' V_0 images.
  const Prefractal lvl1 = build_prefractal_cells(ifs, 1);
  const Prefractal lvl2 = build_prefractal_cells(ifs, 2);
  const std::size_t N = ifs.N();
  const std::size_t per = lvl2.cells.size() / N;
  // Map level-2 vertices back to level-1 vertex ids via coordinates / L.
  std::map<RationalPoint, VertexId> exact_index;
  std::map<std::vector<long long>, VertexId> float_index;
  auto key = [](std::span<const double> c, double scale) {
    std::vector<long long> k;
    for (double x : c) k.push_back(std::llround(x / scale * 1e6));
    return k;
  };
  for (VertexId v = 0; v < lvl1.graph.num_vertices(); ++v) {
    if (ifs.exact) {
      exact_index[lvl1.graph.exact_coord(v)] = v;
    } else {
      float_index[key(lvl1.graph.coord(v), 1.0)] = v;
    }
  }
  auto lookup = [&](VertexId v2) -> std::optional<VertexId> {
    if (ifs.exact) {
      RationalPoint p = lvl2.graph.exact_coord(v2);
      for (auto& x : p) x /= static_cast<std::int64_t>(ifs.L);
      const auto it = exact_index.find(p);
      if (it == exact_index.end()) return std::nullopt;
      return it->second;
    }
    const auto it = float_index.find(key(lvl2.graph.coord(v2), ifs.L));
    if (it == float_index.end()) return std::nullopt;
    return it->second;
  };
  std::vector<std::vector<std::size_t>> owners(lvl2.graph.num_vertices());
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t w = i * per; w < (i + 1) * per; ++w) {
      for (VertexId v : lvl2.cells[w]) {
        if (owners[v].empty() || owners[v].back() != i) owners[v].push_back(i);
      }
    }
  }
  for (VertexId v = 0; v < lvl2.graph.num_vertices(); ++v) {
    if (owners[v].size() < 2) continue;
    const auto v1 = lookup(v);
    for (std::size_t i : owners[v]) {
      const bool in_v0 = v1 && std::find(lvl1.cells[i].begin(), lvl1.cells[i].end(), *v1) !=
                                   lvl1.cells[i].end();
      require(in_v0, ErrorKind::GeneratorDefect,
              "ramification check failed: level-1 cells meet outside their V_0 images");
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> v0_pairs(std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) out.emplace_back(i, j);
  }
  return out;
}

}  // namespace walklab
