#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "walklab/graph.hpp"
#include "walklab/kernels.hpp"

namespace walklab {

/// Space-time box [0,T] x B(x,R) with its sub-boxes
///   Q-  = [T/4, T/2] x B(x, R/2),  Q+ = [3T/4, T) x B(x, R/2),
/// and closure ([0,T] cap Z) x B(x, R+1). Balls are open hop balls.
class Cylinder {
 public:
  // Requires R >= 2 and T >= 4 so that Q- and Q+ are nonempty.
  Cylinder(const WeightedGraph& g, VertexId center, double R, std::size_t T);

  VertexId center() const noexcept { return center_; }
  double R() const noexcept { return R_; }
  std::size_t T() const noexcept { return T_; }

  const std::vector<VertexId>& closure() const noexcept { return closure_; }  // B(x,R+1)
  const std::vector<VertexId>& interior() const noexcept { return interior_; }  // B(x,R)
  const std::vector<VertexId>& ring() const noexcept { return ring_; }  // closure \ interior
  const std::vector<VertexId>& half_ball() const noexcept { return half_; }  // B(x,R/2)

  std::size_t minus_first() const noexcept { return minus_first_; }
  std::size_t minus_last() const noexcept { return minus_last_; }
  std::size_t plus_first() const noexcept { return plus_first_; }
  std::size_t plus_last() const noexcept { return plus_last_; }

  // Position of v in closure(), or -1.
  long local(VertexId v) const { return local_[v]; }

 private:
  VertexId center_;
  double R_;
  std::size_t T_;
  std::vector<VertexId> closure_, interior_, ring_, half_;
  std::size_t minus_first_, minus_last_, plus_first_, plus_last_;
  std::vector<long> local_;
};

/// u(n, .) on the closure for n = 0..T; u[n][i] refers to closure()[i].
struct CaloricField {
  std::vector<std::vector<double>> u;

  double hat(std::size_t n, std::size_t i) const { return u[n + 1][i] + u[n][i]; }
};

/// Evolves initial data (on the closure) by the heat equation on the
/// interior; ring values at time n >= 1 come from lateral[n-1] (one row per
/// time 1..T, one column per ring vertex).
CaloricField caloric_evolve(const WeightedGraph& g, const Cylinder& cyl,
                            const std::vector<double>& initial,
                            const std::vector<std::vector<double>>& lateral);

// max |u(n+1,x) - u(n,x) - L u(n,x)| over n < T, x in the interior.
double caloric_residual(const WeightedGraph& g, const Cylinder& cyl, const CaloricField& f);

// sup over Q- of u-hat and inf over Q+ of u-hat.
std::pair<double, double> harnack_extremes(const Cylinder& cyl, const CaloricField& f);

struct PhiResult {
  double value = 0.0;  // +inf when some generator vanishes on Q+
  bool infinite = false;
  std::size_t generators = 0;
  std::string worst_generator;
};

/// Optimal constant in sup_{Q-} u-hat <= C inf_{Q+} u-hat over nonnegative
/// caloric u. The cone of such u is generated by delta initial data on the
/// closure and delta lateral data on the ring at times 1..T; since
/// (sum a_k)/(sum b_k) <= max a_k/b_k, the optimum is the largest
/// generator ratio.
PhiResult phi_constant(const WeightedGraph& g, const Cylinder& cyl, std::size_t workers = 1);

// Ratio sup_{Q-}/inf_{Q+} for random nonnegative data (trial-th draw of seed).
double random_data_ratio(const WeightedGraph& g, const Cylinder& cyl, std::uint64_t seed,
                         std::uint64_t trial);

struct DecayStep {
  std::size_t k = 0;
  double R_k = 0.0;
  double osc_q = 0.0;       // Osc over Q(k)
  double osc_q_plus = 0.0;  // Osc over Q+(k)
  double c_h = 0.0;         // constant used
  double rhs = 0.0;         // (1 - 1/(2 C_H)) Osc(Q(k))
  bool ok = true;
};

struct DecayReport {
  double c_h = 0.0;
  std::vector<DecayStep> steps;
  bool ok() const;
};

/// Oscillation decay along Q(k) = [T0 - R_k^kappa, T0] x B(x, R_k),
/// Q+(k) = [T0 - 2^-kappa R_k^kappa, T0) x B(x, R_k/2), R_k = 2^-k R0,
/// T0 = round(R0^kappa) (R0 then reset to T0^{1/kappa}), for every k with R_k >= s. C_H is the largest computed
/// optimal constant over the cylinders Q(x, R_k, R_k^kappa) unless c_h > 0
/// is supplied.
DecayReport oscillation_decay_check(const WeightedGraph& g, VertexId x, double R0, double kappa,
                                    double s = 2.0, double c_h = 0.0, std::size_t workers = 1);

struct HolderPoint {
  double R = 0.0;
  double T = 0.0;
  double x = 0.0;  // R / T^{1/kappa}
  double value = 0.0;  // sup_y |q_T(rho) - q_T(y)| * nu(B(rho, T^{1/kappa}/4))
};

struct HolderFit {
  std::vector<HolderPoint> points;
  double c = 0.0;
  double theta = 0.0;
};

/// Evaluates the Holder quantity on the (R, T) grid and fits value = c x^theta.
/// Every grid point must satisfy T^{1/kappa} >= 4R.
HolderFit holder_ratio(const WeightedGraph& g, VertexId rho, const std::vector<double>& Rs,
                       const std::vector<double>& Ts, double kappa);

/// Smallest R in the sweep from which on C_H*(x, R, R^kappa) stays <= cap;
/// 0 when no such R exists.
double phi_threshold(const WeightedGraph& g, VertexId x, const std::vector<double>& Rs,
                     double kappa, double cap, std::size_t workers = 1);

}  // namespace walklab
