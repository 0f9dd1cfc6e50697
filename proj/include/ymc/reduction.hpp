#pragma once

// The reduced form (<W|, |Z>)_0 = E_bridge[ e^{(W, Z^g) + (dg, Z)} ], the map
// V|Z> = Hall state at W_C(Z), and checks relating the two.
//
// For a bridge sample g with increments dX_n and R_n = Ad(g_n), the exponent is
//   dt sum <W_n, R_n Z_n> - sum <R_n^{-1} W_n, dX_n> + sum <dX_n, Z_n>,
// the first two terms being (W, Z^g) with the g^{-1} dg part paired against
// dX (left point). Each sample is averaged over g and g^{-1}; the bridge law is
// invariant under inversion, and the average makes the estimator Hermitian
// sample by sample.

#include <string>
#include <vector>

#include "ymc/fock.hpp"
#include "ymc/heat.hpp"
#include "ymc/mc.hpp"
#include "ymc/paths.hpp"

namespace ymc {

struct ReducedFormEstimate {
  cplx value;
  double se;
  long samples;
  std::uint64_t seed;
  int steps;
  int workers;
  double max_log;  // largest real part of a per-sample exponent
};

struct FieldPair {
  LatticeField w, z;
};

// Per-sample exponents for several (W, Z) pairs on shared bridge samples.
class ReducedFormRun {
 public:
  ReducedFormRun(const GroupSpec& spec, std::vector<FieldPair> pairs, int steps, const McOptions& opt,
                 BridgeMethod method = BridgeMethod::SkewProduct);

  int pairs() const { return static_cast<int>(pairs_.size()); }
  const FieldPair& pair(int p) const { return pairs_[p]; }
  const McOptions& options() const { return opt_; }
  int steps() const { return steps_; }

  // coeff * (<W_p|, |Z_p>)_0.
  ReducedFormEstimate estimate(int p, cplx coeff = 1.0) const;
  // a (<W_p|, |Z_p>)_0 - b (<W_q|, |Z_q>)_0 from per-sample differences.
  ReducedFormEstimate difference(int p, cplx a, int q, cplx b) const;

  // Exponents on the sample path and on its inverse.
  const std::vector<cplx>& logs(int p) const { return logs_[p]; }

 private:
  std::vector<cplx> values(int p, cplx coeff, double shift) const;
  double max_real(int p) const;

  GroupSpec spec_;
  std::vector<FieldPair> pairs_;
  int steps_;
  McOptions opt_;
  std::vector<std::vector<cplx>> logs_;  // pair -> 2 M exponents
};

// The exponent above for one path (not symmetrized).
cplx reduced_log_integrand(const GroupPath& g, const LatticeField& w, const LatticeField& z);

ReducedFormEstimate reduced_form(const LatticeField& w, const LatticeField& z, const McOptions& opt);

// c(Z) = e^{B(Z, Z) / 2} with B the complex bilinear pairing, so that
// (<W|, |Z>)_0 = conj(c(W)) c(Z) (V W, V Z)_unnormalized / rho(e, 1).
cplx normalization_bookkeeping(const LatticeField& z);
HallState reduce_map(const HeatKernelEvaluator& heat, const LatticeField& z);
cplx predicted_reduced_form(const HeatKernelEvaluator& heat, const LatticeField& w, const LatticeField& z);

// U(1) by direct Gaussian integration in each winding sector.
cplx u1_reduced_form(const LatticeField& w, const LatticeField& z, int max_winding = 10);

struct ReductionReport {
  std::string id;
  ReducedFormEstimate mc;
  cplx closed_form;
  cplx ratio;
  double ratio_se;
  bool pass;
};

ReductionReport verify_vp(const HeatKernelEvaluator& heat, const ReducedFormRun& run, int p, double n_se = 3.0);
// (<W|, U(chi)|Z>)_0 against (<W|, |Z>)_0. The run must hold (W, Z^chi) at p and (W, Z) at q.
ReductionReport verify_gauge(const SmoothLoop& chi, const ReducedFormRun& run, int p, int q, double n_se = 3.0);

// Finite character sums f = sum_n c_n chi_n.
class ClassFunction {
 public:
  ClassFunction(GroupSpec spec, std::vector<std::pair<int, cplx>> terms = {});
  static ClassFunction one(const GroupSpec& spec) { return ClassFunction(spec, {{0, 1.0}}); }

  cplx operator()(const GroupElement& k) const;
  ClassFunction operator*(const ClassFunction& o) const;  // by the Clebsch-Gordan rule
  const std::vector<std::pair<int, cplx>>& terms() const { return terms_; }

 private:
  GroupSpec spec_;
  std::vector<std::pair<int, cplx>> terms_;
};

struct HallCombo {
  std::vector<std::pair<cplx, HallState>> terms;
  cplx operator()(const GroupElement& k) const;  // sum of normalized Hall states
};

// f * psi as a function on K.
struct MultipliedState {
  ClassFunction f;
  HallCombo state;
  cplx operator()(const GroupElement& k) const { return f(k) * state(k); }
};

MultipliedState reduced_multiplication(const ClassFunction& f, const HallCombo& s);
MultipliedState reduced_multiplication(const ClassFunction& f, const MultipliedState& s);

L2Result reduced_inner(const GroupSpec& spec, const KFunction& a, const KFunction& b,
                       const QuadratureBudget& budget = {});

}  // namespace ymc
