#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "walklab/graph.hpp"

namespace walklab {

enum class KernelFlavor { raw, smoothed };

/// rows[m][y] = p_m(source, y) (raw) or q_m(source, y) (smoothed), densities
/// against nu.
struct KernelTable {
  VertexId source = 0;
  KernelFlavor flavor = KernelFlavor::raw;
  std::vector<std::vector<double>> rows;

  std::size_t max_step() const noexcept { return rows.empty() ? 0 : rows.size() - 1; }
  double operator()(std::size_t m, VertexId y) const { return rows.at(m).at(y); }
};

// out = P f, (Pf)(x) = sum_y mu_xy f(y) / mu_x. Evolves densities by one step.
void apply_transition(const WeightedGraph& g, std::span<const double> f, std::span<double> out);

// p_0(source, .) = delta_source / nu.
std::vector<double> delta_density(const WeightedGraph& g, VertexId source);

KernelTable evolve_distribution(const WeightedGraph& g, VertexId start, long long steps);
KernelTable smoothed_kernel(const KernelTable& raw);
// q_0..q_M from start (runs the raw evolution to M+1).
KernelTable smoothed_table(const WeightedGraph& g, VertexId start, std::size_t steps);

/// Streams q_m(start, .) for m = 0..steps without storing the table.
void for_each_smoothed_row(const WeightedGraph& g, VertexId start, std::size_t steps,
                           const std::function<void(std::size_t, std::span<const double>)>& fn);

// q_m(start, .) for the requested (arbitrary order, repeats allowed) steps.
std::vector<std::vector<double>> smoothed_rows_at(const WeightedGraph& g, VertexId start,
                                                  const std::vector<std::size_t>& steps);

/// Raw tables from several sources, one worker per source; symmetry
/// p_m(x,y) = p_m(y,x) is checked between sources to 1e-10 relative.
std::map<VertexId, KernelTable> two_point_kernel(const WeightedGraph& g,
                                                 const std::vector<VertexId>& sources,
                                                 std::size_t steps, std::size_t workers = 1);

/// Continuous-time densities p~_t(source, .) by uniformization, truncated
/// once the Poisson(t) tail mass falls below tol.
std::vector<std::vector<double>> continuous_kernel(const WeightedGraph& g, VertexId source,
                                                   const std::vector<double>& times, double tol);

/// u(x) = E_x[exit time of the open hop ball B(center, r)], 0 outside.
std::vector<double> mean_exit_time(const WeightedGraph& g, VertexId center, double r);

// Sum_y row(y) nu(y).
double total_mass(const WeightedGraph& g, std::span<const double> row);

// CSV columns m,vertex,q (smoothed) or m,vertex,p (raw); 17 significant digits.
void write_kernel_csv(const KernelTable& t, const std::string& path);
KernelTable read_kernel_csv(const std::string& path, VertexId source = 0);

std::string format_double(double x);

}  // namespace walklab
