#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "walklab/graph.hpp"

namespace walklab {

enum class Family { lattice, tree, nested, carpet };

Family family_from_string(const std::string& s);
const char* to_string(Family f);

/// (alpha, beta, gamma) at one level together with the factor that maps a
/// point of the limit space to graph coordinates (g_n(x) is the vertex
/// nearest to embed_scale * x).
struct ScalingTriple {
  Family family = Family::lattice;
  double level = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double embed_scale = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
};

struct ScalingParams {
  std::size_t d = 1;          // lattice dimension
  double N = 0.0;             // nested/carpet branch count
  double L = 0.0;             // nested/carpet contraction
  double alpha = 0.0;         // nested distance scaling (defaults to L)
  double lambda = 0.0;        // nested renormalization factor
  double d_w = 0.0;           // carpet walk dimension
  double c1 = 0.0;            // 0 selects the family default
  double c2 = 0.0;
};

/// lattice: (n^{1/2}, c2 n^{d/2}, n) with c2 = 2d and Gaussian variance
///   c1 = 1/d per unit time.
/// tree: (n^{1/2}, 2n, n^{3/2}).
/// nested: (alpha^n, c1 N^n, c2 (N lambda)^n), embedding scale L^n.
/// carpet: (L^n, c1 N^n, c2 L^{d_w n}), embedding scale L^n.
/// Unset nested/carpet constants default to 1. Throws when lambda or d_w
/// is missing for the family that needs it.
ScalingTriple scaling_for(Family family, double level, const ScalingParams& params);

struct RescaledKernel {
  double level = 0.0;
  std::vector<double> t_grid;
  std::size_t num_points = 0;
  std::vector<std::vector<double>> values;  // [t][point]
};

/// f_n(t, x) = beta q_{floor(gamma t)}(rho, g_n(x)) on the grid; points are
/// flattened limit-space coordinates of dimension g.dim().
RescaledKernel rescale_kernel(const WeightedGraph& g, const ScalingTriple& s,
                              const std::vector<double>& t_grid, const std::vector<double>& points);
// Same with explicit vertices in place of projected points.
RescaledKernel rescale_kernel_vertices(const WeightedGraph& g, const ScalingTriple& s,
                                       const std::vector<double>& t_grid,
                                       const std::vector<VertexId>& vertices);

double sup_distance(const RescaledKernel& a, const RescaledKernel& b);
double sup_distance(const RescaledKernel& a, const std::vector<double>& points, std::size_t dim,
                    const std::function<double(double, std::span<const double>)>& reference);

// (2 pi c1 t)^{-d/2} exp(-|x|^2 / (2 c1 t)).
double gaussian_reference(std::size_t d, double c1, double t, std::span<const double> x);

std::vector<double> geometric_grid(double a, double b, std::size_t count);
// Flattened grid of all points of {-r, -r+h, ..., r}^d.
std::vector<double> cube_grid(std::size_t d, double r, double h);

struct TightnessRow {
  double level = 0.0;
  double delta = 0.0;
  double value = 0.0;
};

/// For each delta: sup over pairs x,y in B_E(rho, r) with d_G(x,y) <=
/// alpha delta and over the t-grid of beta |q(x) - q(y)|.
std::vector<TightnessRow> tightness_profile(const WeightedGraph& g, const ScalingTriple& s,
                                            const std::vector<double>& t_grid, double r,
                                            const std::vector<double>& deltas);

struct Comparability {
  double c1_hat = 0.0;       // min d_G / (alpha d_E)
  double c2_hat = 0.0;       // max d_G / (alpha d_E)
  double slope = 0.0;        // least squares d_G = slope * alpha d_E + intercept
  double alpha_tilde = 0.0;  // intercept
  std::size_t pairs = 0;
};

Comparability metric_comparability(const WeightedGraph& g, const ScalingTriple& s, double r,
                                   std::size_t max_pairs = 20000, std::uint64_t seed = 0);

struct MeasureRow {
  double level = 0.0;
  std::size_t center = 0;
  double radius = 0.0;
  double value = 0.0;  // beta^{-1} nu(B_E(x, r))
};

// Centers are flattened limit-space points of dimension g.dim().
std::vector<MeasureRow> measure_convergence(const WeightedGraph& g, const ScalingTriple& s,
                                            const std::vector<double>& centers,
                                            const std::vector<double>& radii);

// True when successive level differences shrink for every (center, radius);
// rows must come from increasing levels.
bool cauchy_decreasing(const std::vector<std::vector<MeasureRow>>& per_level);

struct EinsteinReport {
  std::vector<double> ratios;  // alpha^kappa beta / gamma per level
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

EinsteinReport einstein_check(const std::vector<ScalingTriple>& triples, double kappa);

struct SlopeFit {
  std::vector<double> radii;
  std::vector<double> exit_times;
  double slope = 0.0;
  double intercept = 0.0;
};

// Least-squares slope of log E T(center, r) against log r.
SlopeFit exit_time_slope(const WeightedGraph& g, VertexId center, const std::vector<double>& radii);

// Least-squares fit of log y against log x.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// 2n q_{floor(n^{3/2} t)}(rho, rho) at the root of uniform n-vertex trees.
/// The total mass is 2(n-1), so values carry an n/(n-1) bias.
std::vector<std::vector<double>> tree_root_kernel_samples(std::size_t n,
                                                         const std::vector<std::uint64_t>& seeds,
                                                         const std::vector<double>& t_grid,
                                                         std::size_t workers = 1);

struct KsRow {
  std::size_t n_small = 0;
  std::size_t n_large = 0;
  double t = 0.0;
  double ks = 0.0;
};

/// KS distance between the laws at consecutive sizes, per t.
std::vector<KsRow> tree_distribution_stability(const std::vector<std::size_t>& sizes,
                                               const std::vector<std::uint64_t>& seeds,
                                               const std::vector<double>& t_grid,
                                               std::size_t workers = 1);

}  // namespace walklab
