#pragma once

// Flat Wiener increments, Brownian motion on K via the Ito map, pinned loop
// bridges, stochastic pairings and Cameron-Martin weights.

#include <vector>

#include "ymc/field.hpp"
#include "ymc/heat.hpp"
#include "ymc/loop.hpp"

namespace ymc {

class BridgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Row n holds the increment over [t_n, t_{n+1}], t_n = n T / N.
struct IncrementPath {
  GroupSpec spec;
  double horizon = 1.0;
  Eigen::MatrixXd dx;  // steps x algebra_dim

  static IncrementPath zero(const GroupSpec& spec, int steps, double horizon = 1.0);
  int steps() const { return static_cast<int>(dx.rows()); }
  double dt() const { return horizon / steps(); }
  AlgebraVector increment(int n) const { return {RealCoeffs(dx.row(n).transpose())}; }
};

IncrementPath sample_increments(Rng& rng, int steps, double horizon, const GroupSpec& spec);

struct GroupPath {
  IncrementPath increments;
  std::vector<GroupElement> points;  // g_0 .. g_N

  const GroupSpec& spec() const { return increments.spec; }
  int steps() const { return increments.steps(); }
};

// g_0 = e, g_n = g_{n-1} exp(Delta X_n).
GroupPath ito_map(const IncrementPath& p);
// Inverse direction: increments are principal logs of g_{n-1}^{-1} g_n.
GroupPath path_from_points(const GroupSpec& spec, std::vector<GroupElement> points,
                           double horizon = 1.0);

// Heat-kernel bridge pinned at g_N = e.
//
// SkewProduct (default) is exact at the grid times. U(1): the winding w is
// drawn with mass proportional to e^{-2 pi^2 w^2} and the lift is a Gaussian
// bridge from 0 to 2 pi w. SU(2): in exponential coordinates the distance from
// e evolves like the radius of a flat 3D Brownian bridge kept inside |Y| < 2 pi,
// while the direction runs on the clock int ds / (4 sin^2(r/2)) rather than
// int ds / r^2; the difference is made up by independent isotropic rotations.
//
// Rejection proposes g exp(Delta X), Delta X ~ N(0, dt), and accepts with
// probability rho(g', 1 - t_{n+1}) / rho(e, 1 - t_{n+1}). The mean number of
// tries at the last steps grows like rho(e, 1/N) / rho(e, 1), so it is only
// usable for small N.
//
// Either way the final increment is the principal log of g_{N-1}^{-1}.
enum class BridgeMethod { SkewProduct, Rejection };

class BridgeSampler {
 public:
  BridgeSampler(const GroupSpec& spec, int steps, BridgeMethod method = BridgeMethod::SkewProduct,
                int max_tries = 10000);

  GroupPath sample(Rng& rng) const;
  const HeatKernelEvaluator& heat() const { return heat_; }
  int steps() const { return steps_; }
  BridgeMethod method() const { return method_; }

 private:
  GroupSpec spec_;
  int steps_;
  BridgeMethod method_;
  int max_tries_;
  HeatKernelEvaluator heat_;
  std::vector<double> peak_;         // rho(e, 1 - t_{n+1})
  std::vector<double> winding_cdf_;  // U(1) sector masses, w = -W..W
};

// Rejection bridge with an externally supplied evaluator, which must certify t = 1/N.
GroupPath loop_bridge(Rng& rng, int steps, const HeatKernelEvaluator& heat, int max_tries = 10000);

// sum_n <Delta X_{n+1}, Z_n>, the real increment in the antilinear slot.
// With midpoint = true the integrand is (Z_n + Z_{n+1}) / 2, wrapping periodically.
cplx pair_field(const IncrementPath& p, const LatticeField& z, bool midpoint = false);
inline cplx pair_field(const GroupPath& g, const LatticeField& z, bool midpoint = false) {
  return pair_field(g.increments, z, midpoint);
}

// Cameron-Martin quantities for a step-function shift w, with increments on
// the same grid: ||w||^2 = sum |Delta w|^2 / dt and (w, v) = sum <Delta w, Delta v> / dt.
double cm_energy(const IncrementPath& w);
double cm_pairing(const IncrementPath& w, const IncrementPath& v);
// e^{-||w||^2/2 - (w, v)}; E[F(v + w) weight(v)] = E[F(v)].
double cm_weight_flat(const IncrementPath& v, const IncrementPath& w);

// e^{-||chi'||^2/2 - sum_n <Delta X_{n+1}, Ad(chi(t_n)) chi'(t_n)>};
// E[F(g chi) weight(g)] = E[F(g)] for bridges g.
class LoopWeight {
 public:
  LoopWeight(const SmoothLoop& chi, int steps);
  double log_weight(const GroupPath& g) const;
  double operator()(const GroupPath& g) const { return std::exp(log_weight(g)); }
  double energy() const { return energy_; }

 private:
  LatticeField drift_;
  double energy_;
};
double cm_weight_loop(const GroupPath& g, const SmoothLoop& chi);

// Pointwise product g_n chi(t_n).
GroupPath translate(const GroupPath& g, const SmoothLoop& chi);

}  // namespace ymc
