#include "ymc/reduction.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "ymc/gauge.hpp"

namespace ymc {

namespace {

Eigen::MatrixXd adjoint_matrix(const GroupSpec& spec, const GroupElement& g) {
  const int d = spec.algebra_dim();
  Eigen::MatrixXd r(d, d);
  for (int a = 0; a < d; ++a) {
    AlgebraVector e = AlgebraVector::zero(spec);
    e.c(a) = 1.0;
    r.col(a) = adjoint(spec, g, e).c;
  }
  return r;
}

void check_pair(const GroupSpec& spec, const FieldPair& p, int steps) {
  require_same_shape(p.w, p.z);
  if (p.w.spec().id() != spec.id() || p.w.steps() != steps || p.w.offset() != 0.0)
    throw std::invalid_argument("reduced form needs left-point fields on the sampling grid");
}

}  // namespace

cplx reduced_log_integrand(const GroupPath& g, const LatticeField& w, const LatticeField& z) {
  require_same_shape(w, z);
  const GroupSpec& spec = w.spec();
  const int steps = w.steps();
  if (g.increments.steps() != steps) throw std::invalid_argument("path and fields differ in N");
  cplx s = 0.0;
  for (int n = 0; n < steps; ++n) {
    const GroupElement& gn = g.points[n];
    const ComplexAlgebraVector dx{g.increments.increment(n).c.cast<cplx>()};
    s += w.dt() * inner(w.slice(n), adjoint(spec, gn, z.slice(n)));
    s -= inner(adjoint(spec, gn.inverse(), w.slice(n)), dx);
    s += inner(dx, z.slice(n));
  }
  return s;
}

ReducedFormRun::ReducedFormRun(const GroupSpec& spec, std::vector<FieldPair> pairs, int steps,
                               const McOptions& opt, BridgeMethod method)
    : spec_(spec), pairs_(std::move(pairs)), steps_(steps), opt_(opt) {
  for (const auto& p : pairs_) check_pair(spec, p, steps);
  const BridgeSampler bridge(spec, steps, method);
  const int np = static_cast<int>(pairs_.size());
  const double dt = 1.0 / steps;
  auto one = [&](Rng& rng) {
    const GroupPath g = bridge.sample(rng);
    std::vector<cplx> out(2 * np, 0.0);
    for (int n = 0; n < steps; ++n) {
      const Eigen::MatrixXd r = adjoint_matrix(spec, g.points[n]);
      const Eigen::VectorXd dx = g.increments.dx.row(n).transpose();
      const Eigen::VectorXd rdx = r * dx;
      for (int p = 0; p < np; ++p) {
        const Eigen::VectorXcd wn = pairs_[p].w.data().row(n).transpose();
        const Eigen::VectorXcd zn = pairs_[p].z.data().row(n).transpose();
        const Eigen::VectorXcd rz = r.cast<cplx>() * zn, rtz = r.transpose().cast<cplx>() * zn;
        // path g
        out[2 * p] += dt * wn.dot(rz) - wn.dot(rdx.cast<cplx>()) + dx.cast<cplx>().dot(zn);
        // path g^{-1}: Ad becomes R^T and the increments become -R dX
        out[2 * p + 1] += dt * wn.dot(rtz) + wn.dot(dx.cast<cplx>()) - dx.cast<cplx>().dot(rtz);
      }
    }
    return out;
  };
  const auto samples = mc_map<std::vector<cplx>>(opt, one);
  logs_.assign(np, std::vector<cplx>(2 * opt.samples));
  for (long i = 0; i < opt.samples; ++i)
    for (int p = 0; p < np; ++p) {
      logs_[p][2 * i] = samples[i][2 * p];
      logs_[p][2 * i + 1] = samples[i][2 * p + 1];
    }
  for (int p = 0; p < np; ++p) {
    for (const cplx& l : logs_[p]) {
      if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) {
        std::ostringstream msg;
        msg << "reduced form pair " << p << ": non-finite exponent (largest finite real part "
            << max_real(p) << ")";
        throw DomainError(msg.str());
      }
    }
  }
}

double ReducedFormRun::max_real(int p) const {
  double m = -std::numeric_limits<double>::infinity();
  for (const cplx& l : logs_[p])
    if (std::isfinite(l.real())) m = std::max(m, l.real());
  return m;
}

std::vector<cplx> ReducedFormRun::values(int p, cplx coeff, double shift) const {
  const auto& l = logs_[p];
  std::vector<cplx> v(opt_.samples);
  for (long i = 0; i < opt_.samples; ++i)
    v[i] = coeff * 0.5 * (std::exp(l[2 * i] - shift) + std::exp(l[2 * i + 1] - shift));
  return v;
}

ReducedFormEstimate ReducedFormRun::estimate(int p, cplx coeff) const {
  const double shift = max_real(p);
  const Estimate e = mean_estimate(values(p, coeff, shift));
  const double scale = std::exp(shift);
  return {e.value * scale, e.se * scale, e.samples, opt_.seed, steps_, opt_.workers, shift};
}

ReducedFormEstimate ReducedFormRun::difference(int p, cplx a, int q, cplx b) const {
  const double shift = std::max(max_real(p), max_real(q));
  std::vector<cplx> vp = values(p, a, shift);
  const std::vector<cplx> vq = values(q, b, shift);
  for (long i = 0; i < opt_.samples; ++i) vp[i] -= vq[i];
  const Estimate e = mean_estimate(vp);
  const double scale = std::exp(shift);
  return {e.value * scale, e.se * scale, e.samples, opt_.seed, steps_, opt_.workers, shift};
}

ReducedFormEstimate reduced_form(const LatticeField& w, const LatticeField& z, const McOptions& opt) {
  const ReducedFormRun run(w.spec(), {{w, z}}, w.steps(), opt);
  return run.estimate(0);
}

cplx normalization_bookkeeping(const LatticeField& z) { return std::exp(0.5 * field_bilinear(z, z)); }

HallState reduce_map(const HeatKernelEvaluator& heat, const LatticeField& z) {
  return HallState(heat, wilson_c(z), 0.5);
}

cplx predicted_reduced_form(const HeatKernelEvaluator& heat, const LatticeField& w, const LatticeField& z) {
  const cplx overlap = hall_overlap_unnormalized(reduce_map(heat, w), reduce_map(heat, z));
  return std::conj(normalization_bookkeeping(w)) * normalization_bookkeeping(z) * overlap /
         heat.rho(GroupElement::identity(heat.spec()), 1.0);
}

cplx u1_reduced_form(const LatticeField& w, const LatticeField& z, int max_winding) {
  require_same_shape(w, z);
  if (w.spec().id() != GroupId::U1) throw std::invalid_argument("u1_reduced_form needs U(1) fields");
  const Eigen::VectorXcd h = z.data().col(0) - w.data().col(0).conjugate();
  const double dt = w.dt();
  const cplx a = dt * h.sum();
  const cplx s = dt * h.cwiseProduct(h).sum();
  cplx theta = 0.0;
  double mass = 0.0;
  for (int k = -max_winding; k <= max_winding; ++k) {
    const double p = std::exp(-2.0 * M_PI * M_PI * k * k);
    mass += p;
    theta += p * std::exp(2.0 * M_PI * k * a);
  }
  return std::exp(field_inner(w, z) + 0.5 * s - 0.5 * a * a) * theta / mass;
}

ReductionReport verify_vp(const HeatKernelEvaluator& heat, const ReducedFormRun& run, int p, double n_se) {
  const FieldPair& fp = run.pair(p);
  ReductionReport r;
  r.id = "vp";
  r.mc = run.estimate(p);
  r.closed_form = predicted_reduced_form(heat, fp.w, fp.z);
  r.ratio = r.mc.value / r.closed_form;
  r.ratio_se = r.mc.se / std::abs(r.closed_form);
  r.pass = std::abs(r.ratio - 1.0) <= n_se * r.ratio_se + 1e-12;
  return r;
}

ReductionReport verify_gauge(const SmoothLoop& chi, const ReducedFormRun& run, int p, int q, double n_se) {
  const cplx coeff = ggv_coefficient(chi, run.pair(q).z);
  ReductionReport r;
  r.id = "gauge";
  r.mc = run.difference(p, coeff, q, 1.0);
  r.closed_form = 0.0;
  r.ratio = run.estimate(p, coeff).value / run.estimate(q).value;
  r.ratio_se = r.mc.se / std::abs(run.estimate(q).value);
  r.pass = std::abs(r.mc.value) <= n_se * r.mc.se + 1e-12 * std::abs(run.estimate(q).value);
  return r;
}

ClassFunction::ClassFunction(GroupSpec spec, std::vector<std::pair<int, cplx>> terms)
    : spec_(spec), terms_(std::move(terms)) {}

cplx ClassFunction::operator()(const GroupElement& k) const {
  const ComplexGroupElement kc{k.m};
  cplx s = 0.0;
  for (const auto& [label, c] : terms_) s += c * character(spec_, label, kc);
  return s;
}

ClassFunction ClassFunction::operator*(const ClassFunction& o) const {
  std::map<int, cplx> acc;
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      if (spec_.id() == GroupId::U1) {
        acc[a + b] += ca * cb;
      } else {
        for (int c = std::abs(a - b); c <= a + b; c += 2) acc[c] += ca * cb;
      }
    }
  return ClassFunction(spec_, {acc.begin(), acc.end()});
}

cplx HallCombo::operator()(const GroupElement& k) const {
  cplx s = 0.0;
  for (const auto& [c, psi] : terms) s += c * hall_eval(psi, k);
  return s;
}

MultipliedState reduced_multiplication(const ClassFunction& f, const HallCombo& s) { return {f, s}; }

MultipliedState reduced_multiplication(const ClassFunction& f, const MultipliedState& s) {
  return {f * s.f, s.state};
}

L2Result reduced_inner(const GroupSpec& spec, const KFunction& a, const KFunction& b,
                       const QuadratureBudget& budget) {
  return l2k_inner_quadrature(spec, a, b, budget);
}

}  // namespace ymc
