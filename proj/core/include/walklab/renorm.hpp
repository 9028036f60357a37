#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "walklab/graph.hpp"
#include "walklab/ifs.hpp"
#include "walklab/weights.hpp"

namespace walklab {

/// Symmetric nonnegative conductances on unordered pairs of a finite set
/// (diagonal ignored and kept at zero).
struct ConductanceSet {
  Eigen::MatrixXd C;

  std::size_t size() const noexcept { return static_cast<std::size_t>(C.rows()); }
  double max_entry() const;
  // Sum over unordered pairs x<y of C_xy (f(x) - f(y))^2.
  double energy(const std::vector<double>& f) const;
  // Upper-triangle entries in v0_pairs order.
  std::vector<double> pair_values() const;
  static ConductanceSet from_pairs(std::size_t m, const std::vector<double>& values);
  static ConductanceSet uniform(std::size_t m, double value = 1.0);
};

// Throws InvalidArgument on asymmetry/negativity, ConnectivityDefect when the
// induced network is disconnected.
void validate_conductance(const ConductanceSet& c);

// Network on vertices 0..n-1; parallel edges add.
struct Network {
  std::size_t n = 0;
  std::vector<Edge> edges;
};

Network network_from_graph(const WeightedGraph& g);

/// One copy of C per level-1 cell, glued at identified points.
Network replicate(const IfsSpec& ifs, const ConductanceSet& c);
// Cell w receives its own conductances per_cell[w].
Network replicate_cells(const Prefractal& pf, const std::vector<ConductanceSet>& per_cell);

/// Schur complement of the network Laplacian onto B, as pair conductances.
ConductanceSet trace_to(const Network& net, const std::vector<VertexId>& B);

// Lambda(C): replicate then trace back to V_0.
ConductanceSet renormalize(const IfsSpec& ifs, const ConductanceSet& c);

struct FixedPointResult {
  ConductanceSet fixed_point;  // normalized to max entry 1
  double lambda = 0.0;
  std::size_t iterations = 0;
  std::vector<double> trajectory;  // max-norm change per iteration
};

/// Iterates C -> Lambda(C)/max(Lambda(C)) until successive iterates differ
/// by < tol in max norm; lambda = max(C)/max(Lambda(C)) at the end.
FixedPointResult lambda_fixed_point(const IfsSpec& ifs, const ConductanceSet& c0, double tol = 1e-13,
                                    std::size_t max_iter = 100000);

enum class TraceMode { direct, nested };

struct HomogenizeSample {
  std::uint64_t seed = 0;
  std::size_t level = 0;
  ConductanceSet value;  // lambda^n Lambda^n(mu)
};

// Per-cell conductance sets of the level-n cells drawn from the law.
std::vector<ConductanceSet> draw_cell_conductances(const IfsSpec& ifs, const WeightLaw& law,
                                                   std::size_t level);

/// lambda^n Lambda^n(mu) for one weight realisation, either by one Schur
/// complement of the level-n network (direct, limited to 200000 vertices)
/// or by n nested single-level traces (exact by the quotient property).
ConductanceSet homogenize_one(const IfsSpec& ifs, const WeightLaw& law, std::size_t level,
                              double lambda, TraceMode mode);

std::vector<HomogenizeSample> homogenize(const IfsSpec& ifs, const WeightLaw& law, std::size_t level,
                                         const std::vector<std::uint64_t>& seeds, double lambda,
                                         TraceMode mode = TraceMode::nested, std::size_t workers = 1);

// Per-entry standard deviation across samples, maximised over entries.
double max_entry_sd(const std::vector<HomogenizeSample>& samples);

struct Exponents {
  double d_f = 0.0;
  double d_w = 0.0;
  double kappa = 0.0;
  double d_c = 0.0;
};

Exponents exponents(double N, double L, double lambda, double alpha);

}  // namespace walklab
