#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "walklab/graph.hpp"
#include "walklab/llt.hpp"

namespace walklab {

/// Finite pointed metric space with a kernel curve per point, sampled on a
/// shared t-grid. curves[x][i] is q_{t_i}(x).
struct PointedKernelSpace {
  std::size_t size = 0;
  std::vector<double> metric;  // row-major size x size
  std::size_t root = 0;
  std::vector<double> t_grid;
  std::vector<std::vector<double>> curves;

  double d(std::size_t x, std::size_t y) const { return metric[x * size + y]; }
};

// Throws InvalidArgument on asymmetric / non-zero-diagonal / negative entries,
// triangle violations beyond 1e-9, or curve shape mismatch.
void validate_space(const PointedKernelSpace& s);

nlohmann::json space_to_json(const PointedKernelSpace& s);
PointedKernelSpace space_from_json(const nlohmann::json& j);

// Hop metric divided by alpha, curves beta q_{floor(gamma t)}(x) from the root.
PointedKernelSpace kernel_space_from_graph(const WeightedGraph& g, const ScalingTriple& s,
                                           const std::vector<double>& t_grid);

using Correspondence = std::vector<std::pair<std::size_t, std::size_t>>;

// Covers both sides and contains the root pair.
bool is_correspondence(const PointedKernelSpace& a, const PointedKernelSpace& b,
                       const Correspondence& c);

double distortion(const PointedKernelSpace& a, const PointedKernelSpace& b, const Correspondence& c);
// Max over pairs and grid times of |q^a_t(x) - q^b_t(y)|.
double kernel_mismatch(const PointedKernelSpace& a, const PointedKernelSpace& b,
                       const Correspondence& c);
double delta_of(const PointedKernelSpace& a, const PointedKernelSpace& b, const Correspondence& c);

enum class DeltaMode { exact, heuristic };

DeltaMode delta_mode_from_string(const std::string& s);

struct DeltaResult {
  double value = 0.0;
  Correspondence witness;  // sorted
};

inline constexpr std::size_t kExactDeltaCap = 36;

/// Exact mode: branch and bound over unions of a map a->b and a map b->a,
/// both sending root to root; every minimal root-respecting correspondence
/// has that form. Needs |a||b| <= kExactDeltaCap.
/// Heuristic mode: greedy cover then 1-move and 2-swap local search.
DeltaResult delta_distance(const PointedKernelSpace& a, const PointedKernelSpace& b,
                           DeltaMode mode);

// Random space of `points` points: Euclidean metric of uniform points in the
// unit square, curves uniform in [0,1] on `grid` times.
PointedKernelSpace random_space(std::size_t points, std::size_t grid, std::uint64_t seed);

// Relabels points by `perm` (new index perm[i] holds old point i).
PointedKernelSpace permute_space(const PointedKernelSpace& s, const std::vector<std::size_t>& perm);

struct AxiomReport {
  std::size_t samples = 0;
  double max_asymmetry = 0.0;
  double max_self_distance = 0.0;
  double worst_triangle_excess = 0.0;  // max of D(a,c) - D(a,b) - D(b,c)
  std::size_t triangle_violations = 0;
  std::size_t isometric_copy_failures = 0;

  bool ok(double tol = 1e-9) const;
};

// Exact-mode checks on random spaces of 1 to 5 points.
AxiomReport metric_axiom_suite(std::size_t samples, std::uint64_t seed, std::size_t workers = 1);

}  // namespace walklab
