#include "walklab/weights.hpp"

#include <algorithm>
#include <cmath>

#include "walklab/error.hpp"
#include "walklab/rng.hpp"

namespace walklab {

WeightLaw::Kind weight_kind_from_string(const std::string& s) {
  if (s == "constant") return WeightLaw::Kind::constant;
  if (s == "iid_uniform") return WeightLaw::Kind::iid_uniform;
  if (s == "iid_lognormal_clipped") return WeightLaw::Kind::iid_lognormal_clipped;
  if (s == "cell_symmetric") return WeightLaw::Kind::cell_symmetric;
  fail(ErrorKind::InvalidArgument, "unknown weight law '" + s + "'");
}

const char* to_string(WeightLaw::Kind k) {
  switch (k) {
    case WeightLaw::Kind::constant: return "constant";
    case WeightLaw::Kind::iid_uniform: return "iid_uniform";
    case WeightLaw::Kind::iid_lognormal_clipped: return "iid_lognormal_clipped";
    case WeightLaw::Kind::cell_symmetric: return "cell_symmetric";
  }
  return "unknown";
}

void validate_law(const WeightLaw& law) {
  require(std::isfinite(law.a) && std::isfinite(law.b) && law.a > 0.0 && law.a <= law.b,
          ErrorKind::InvalidArgument, "weight law needs 0 < a <= b < inf");
  require(law.kind != WeightLaw::Kind::constant || law.a == law.b, ErrorKind::InvalidArgument,
          "constant law needs a == b");
}

std::uint64_t cell_pair_key(std::uint64_t cell, std::uint64_t pair) {
  return (cell << 20) ^ pair;
}

double draw_weight(const WeightLaw& law, std::uint64_t key) {
  CounterRng rng(law.seed, key);
  switch (law.kind) {
    case WeightLaw::Kind::constant:
      return law.a;
    case WeightLaw::Kind::iid_uniform:
    case WeightLaw::Kind::cell_symmetric:
      return rng.uniform(law.a, law.b);
    case WeightLaw::Kind::iid_lognormal_clipped: {
      const double la = std::log(law.a);
      const double lb = std::log(law.b);
      const double x = std::exp(0.5 * (la + lb) + 0.25 * (lb - la) * rng.normal());
      return std::clamp(x, law.a, law.b);
    }
  }
  return law.a;
}

WeightedGraph assign_weights(const WeightedGraph& g, const WeightLaw& law) {
  validate_law(law);
  std::vector<double> w(g.num_edges());
  if (law.kind == WeightLaw::Kind::cell_symmetric) {
    require(g.has_cell_tags(), ErrorKind::InvalidArgument,
            "cell-symmetric weights need a graph with cell annotations");
    for (std::size_t i = 0; i < w.size(); ++i) {
      const CellTag& t = g.cell_tags()[i];
      w[i] = draw_weight(law, cell_pair_key(t.cell, t.pair));
    }
  } else {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = draw_weight(law, i);
  }
  return g.with_weights(w);
}

}  // namespace walklab
