#pragma once

// Heat kernels on K and K_C from truncated character sums, Hall coherent
// states, the phase-space measure mu_hbar, and L^2(K) pairings.

#include <functional>
#include <vector>

#include "ymc/group.hpp"

namespace ymc {

class TruncationError : public DomainError {
 public:
  using DomainError::DomainError;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// rho(x,t) = sum_j dim_j e^{-t lambda_j / 2} chi_j(x), normalized against
// normalized Haar measure. Each call truncates adaptively where the geometric
// tail bound of dim_j^2 e^{n |Im z|} e^{-t lambda_j/2} drops below eps_tail;
// label_cap() is the worst case over the working domain t >= t_min,
// |Im z| <= im_bound, and evaluations needing more terms are refused.
class HeatKernelEvaluator {
 public:
  explicit HeatKernelEvaluator(GroupSpec spec, double t_min = 0.05, double im_bound = 3.0,
                               double eps_tail = 1e-12);

  const GroupSpec& spec() const { return spec_; }
  double t_min() const { return t_min_; }
  double im_bound() const { return im_bound_; }
  double eps_tail() const { return eps_tail_; }
  // Largest label (2j for SU(2), |m| for U(1)) ever summed.
  int label_cap() const { return label_cap_; }

  double rho(const GroupElement& x, double t) const;
  cplx rho_c(const ComplexGroupElement& sigma, double t) const;

  // Number of labels the tail criterion needs at (t, |Im z|).
  int labels_needed(double t, double im_extent) const;

 private:
  void check_time(double t) const;

  GroupSpec spec_;
  double t_min_, im_bound_, eps_tail_;
  int label_cap_;
};

// Psi(k) = rho_C(k^{-1} sigma, hbar) / norm. The norm
// ||rho_C(.^{-1} sigma, hbar)||_{L^2(K)} = rho_C(sigma^dagger sigma, 2 hbar)^{1/2}
// depends on sigma, so each state carries its own.
class HallState {
 public:
  HallState(const HeatKernelEvaluator& heat, ComplexGroupElement sigma, double hbar);

  const ComplexGroupElement& sigma() const { return sigma_; }
  double hbar() const { return hbar_; }
  // L^2 norm of the unnormalized state.
  double norm() const { return norm_; }
  const HeatKernelEvaluator& heat() const { return *heat_; }

 private:
  const HeatKernelEvaluator* heat_;
  ComplexGroupElement sigma_;
  double hbar_;
  double norm_;
};

cplx hall_eval(const HallState& state, const GroupElement& k);
cplx hall_eval_unnormalized(const HallState& state, const GroupElement& k);

// Normalized overlap, antilinear in the first argument.
cplx hall_overlap(const HallState& a, const HallState& b);
// sum_j dim_j e^{-hbar lambda_j} chi_j(sigma_a^dagger sigma_b).
cplx hall_overlap_unnormalized(const HallState& a, const HallState& b);

// Sample of k * gamma where k is Haar on K and gamma is the complexified
// Brownian motion driven by {X_a, i X_a} run for time hbar/2.
ComplexGroupElement mu_hbar_sample(const GroupSpec& spec, Rng& rng, double hbar, int steps = 256);

using KFunction = std::function<cplx(const GroupElement&)>;

struct L2Result {
  cplx value;
  double error;  // quadrature error estimate, or Monte Carlo standard error
  long evaluations;
};

struct QuadratureBudget {
  int polar_nodes = 24;  // Gauss-Legendre nodes in u = |g_11|^2 (SU(2) only)
  int angle_nodes = 64;  // trapezoid nodes per angle
  double tolerance = 1e-10;
};

// int_K conj(f) g dk. SU(2) uses g = [[e^{i a} sqrt(u), e^{i b} sqrt(1-u)], ...]
// in which Haar measure is du da db / (4 pi^2). The error estimate compares
// against a rule with three quarters of the nodes; exceeding tolerance
// (relative to max(1, |value|)) throws BudgetError.
L2Result l2k_inner_quadrature(const GroupSpec& spec, const KFunction& f, const KFunction& g,
                              const QuadratureBudget& budget = {});
L2Result l2k_inner_mc(const GroupSpec& spec, const KFunction& f, const KFunction& g, long samples,
                      Rng& rng);

// Nodes of the product rule, weights summing to one.
struct QuadratureRule {
  std::vector<GroupElement> points;
  std::vector<double> weights;
};
QuadratureRule haar_rule(const GroupSpec& spec, int polar_nodes, int angle_nodes);

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace ymc
