#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "walklab/graph.hpp"
#include "walklab/kernels.hpp"

namespace walklab {

// Sum over edges of mu_xy (f(x) - f(y))^2, i.e. half the sum over ordered pairs.
double dirichlet_energy(const WeightedGraph& g, std::span<const double> f);
double dirichlet_energy(const WeightedGraph& g, std::span<const double> f,
                        std::span<const double> h);

// (L f)(x) = sum_y P(x,y) (f(y) - f(x)).
std::vector<double> generator_apply(const WeightedGraph& g, std::span<const double> f);
// -(L f, f) with the nu-weighted inner product.
double generator_form(const WeightedGraph& g, std::span<const double> f);

struct ResistanceSolution {
  double value = 0.0;
  // Unit-current potential, 0 at y and R at x; achieves the variational sup.
  std::vector<double> potential;
};

ResistanceSolution effective_resistance(const WeightedGraph& g, VertexId x, VertexId y);

// R(rho, x) for every x from one factorization.
std::vector<double> resistances_from(const WeightedGraph& g, VertexId rho);

// Dense all-pairs matrix via the grounded inverse (capacity 4000 vertices).
Eigen::MatrixXd all_pairs_resistance(const WeightedGraph& g);

/// Resistance-volume profile around a center: V(r) is the nu-mass of the
/// closed resistance ball, h(r) = r V(r).
struct ResistanceProfile {
  VertexId center = 0;
  std::vector<double> resistance;  // R(center, x)
  std::vector<double> radii;       // sorted distinct values, radii[0] = 0
  std::vector<double> volume;      // V at each radius

  double V(double r) const;
  double h(double r) const;
  // sup{r : h(r) <= m}, exact on the step structure.
  double h_inverse(double m) const;
};

ResistanceProfile resistance_profile(const WeightedGraph& g, VertexId rho);
ResistanceProfile profile_from_resistances(const WeightedGraph& g, VertexId rho,
                                           std::vector<double> resistance);

struct InequalityRow {
  std::string inequality;
  std::size_t m = 0;
  VertexId x = 0;
  VertexId y = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};

struct InequalityReport {
  std::vector<InequalityRow> rows;        // worst row per (inequality, m)
  std::vector<InequalityRow> violations;  // rows beyond tolerance
  std::size_t checks = 0;
  double worst_ratio = 0.0;               // max lhs/rhs over all checks with rhs > 0
  // For the energy identity: max |2E - (q_2m - q_2m+2)| relative error and
  // the literal ratio (q_2m - q_2m+2)/E observed where E is not negligible.
  double identity_max_rel_error = 0.0;
  double identity_ratio_min = 0.0;
  double identity_ratio_max = 0.0;

  bool ok() const noexcept { return violations.empty(); }
  std::string describe_first_violation() const;
};

inline constexpr double kFloatSlack = 1e-12;
inline constexpr double kIdentityTolerance = 1e-10;

/// For m = 1..M checks: the energy identity q_2m(rho) - q_2m+2(rho) =
/// 2 E(q_m, q_m); monotone nonincrease of E(q_m, q_m); the bound
/// E(q_m, q_m) <= 2 q_{2 ceil(m/2)}(rho) / m; and the on-diagonal bound
/// q_2m(rho) <= 3 h^{-1}(m) / m.
InequalityReport verify_energy_chain(const WeightedGraph& g, VertexId rho, std::size_t M);
InequalityReport verify_energy_chain(const WeightedGraph& g, VertexId rho, std::size_t M,
                                     const ResistanceProfile& profile);

/// Oscillation bound (q_m(x) - q_m(y))^2 <= 12 R(x,y) h^{-1}(ceil(m/2)) / m^2
/// for m = 1..M over the given pairs (all pairs when empty), with q taken
/// from `kernel` when provided (rows 0..M) or computed from rho otherwise.
InequalityReport verify_oscillation_bound(const WeightedGraph& g, VertexId rho, std::size_t M,
                                          const std::vector<std::pair<VertexId, VertexId>>& pairs,
                                          const KernelTable* kernel = nullptr);

void write_inequality_csv(const InequalityReport& r, const std::string& path);
void append_inequality_csv(const InequalityReport& r, std::ostream& out);

}  // namespace walklab
