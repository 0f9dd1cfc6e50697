#include "ymc/paths.hpp"

#include <cmath>
#include <sstream>

namespace ymc {

IncrementPath IncrementPath::zero(const GroupSpec& spec, int steps, double horizon) {
  if (steps < 1) throw std::invalid_argument("increment path needs at least one step");
  return {spec, horizon, Eigen::MatrixXd::Zero(steps, spec.algebra_dim())};
}

IncrementPath sample_increments(Rng& rng, int steps, double horizon, const GroupSpec& spec) {
  IncrementPath p = IncrementPath::zero(spec, steps, horizon);
  std::normal_distribution<double> normal(0.0, std::sqrt(horizon / steps));
  for (int n = 0; n < steps; ++n)
    for (int a = 0; a < spec.algebra_dim(); ++a) p.dx(n, a) = normal(rng);
  return p;
}

GroupPath ito_map(const IncrementPath& p) {
  GroupPath g{p, {}};
  g.points.reserve(p.steps() + 1);
  g.points.push_back(GroupElement::identity(p.spec));
  for (int n = 0; n < p.steps(); ++n) g.points.push_back(g.points.back() * exp_map(p.spec, p.increment(n)));
  return g;
}

GroupPath path_from_points(const GroupSpec& spec, std::vector<GroupElement> points, double horizon) {
  if (points.size() < 2) throw std::invalid_argument("group path needs at least two points");
  IncrementPath inc = IncrementPath::zero(spec, static_cast<int>(points.size()) - 1, horizon);
  for (int n = 0; n < inc.steps(); ++n)
    inc.dx.row(n) = log_map(spec, points[n].inverse() * points[n + 1]).c.transpose();
  return {std::move(inc), std::move(points)};
}

namespace {

GroupPath bridge_impl(const GroupSpec& spec, int steps, const HeatKernelEvaluator& heat,
                      const std::vector<double>& peak, int max_tries, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(1.0 / steps));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  GroupPath g{IncrementPath::zero(spec, steps), {}};
  g.points.reserve(steps + 1);
  g.points.push_back(GroupElement::identity(spec));
  RealCoeffs dx(spec.algebra_dim());
  for (int n = 0; n + 1 < steps; ++n) {
    const double remaining = double(steps - n - 1) / steps;
    int tries = 0;
    for (;;) {
      if (++tries > max_tries) {
        std::ostringstream msg;
        msg << "bridge step " << n << " of " << steps << " rejected " << max_tries << " proposals";
        throw BridgeError(msg.str());
      }
      for (int a = 0; a < spec.algebra_dim(); ++a) dx(a) = normal(rng);
      const GroupElement next = g.points.back() * exp_map(spec, AlgebraVector{dx});
      const double accept = heat.rho(next, remaining) / peak[n];
      if (uniform(rng) < accept) {
        g.increments.dx.row(n) = dx.transpose();
        g.points.push_back(next);
        break;
      }
    }
  }
  const GroupElement last = g.points.back();
  g.increments.dx.row(steps - 1) = log_map(spec, last.inverse()).c.transpose();
  g.points.push_back(GroupElement::identity(spec));
  return g;
}

std::vector<double> bridge_peaks(const HeatKernelEvaluator& heat, int steps) {
  std::vector<double> peak(steps > 1 ? steps - 1 : 0);
  for (int n = 0; n + 1 < steps; ++n)
    peak[n] = heat.rho(GroupElement::identity(heat.spec()), double(steps - n - 1) / steps);
  return peak;
}

}  // namespace

namespace {

constexpr int kMaxWinding = 4;

// 1/(4 sin^2(r/2)) - 1/r^2, the excess angular clock rate on SU(2).
double clock_excess(double r) {
  if (r < 1e-3) return 1.0 / 12.0 + r * r / 240.0;
  const double s = 2.0 * std::sin(0.5 * r);
  return 1.0 / (s * s) - 1.0 / (r * r);
}

GroupPath skew_product_su2(const GroupSpec& spec, int steps, Rng& rng) {
  std::normal_distribution<double> normal;
  const double dt = 1.0 / steps;
  const double sd = std::sqrt(dt);
  Eigen::MatrixXd y(steps + 1, 3);
  for (;;) {
    y.row(0).setZero();
    for (int n = 0; n < steps; ++n)
      for (int a = 0; a < 3; ++a) y(n + 1, a) = y(n, a) + sd * normal(rng);
    const Eigen::RowVector3d end = y.row(steps);
    for (int n = 0; n <= steps; ++n) y.row(n) -= (double(n) / steps) * end;
    y.row(steps).setZero();
    // exit from the ball |Y| < 2 pi has probability ~ e^{-80}; resample if it happens
    if (y.rowwise().norm().maxCoeff() < 2.0 * M_PI - 1e-9) break;
  }
  std::vector<GroupElement> pts;
  pts.reserve(steps + 1);
  GroupElement h = GroupElement::identity(spec);
  RealCoeffs omega(3);
  for (int n = 0; n <= steps; ++n) {
    const AlgebraVector yn{RealCoeffs(y.row(n).transpose())};
    pts.push_back(h * exp_map(spec, yn) * h.inverse());
    if (n == steps) break;
    const double extra = 0.5 * dt * (clock_excess(y.row(n).norm()) + clock_excess(y.row(n + 1).norm()));
    const double w_sd = std::sqrt(extra);
    for (int a = 0; a < 3; ++a) omega(a) = w_sd * normal(rng);
    h = exp_map(spec, AlgebraVector{omega}) * h;
  }
  pts.back() = GroupElement::identity(spec);
  return path_from_points(spec, std::move(pts));
}

GroupPath skew_product_u1(const GroupSpec& spec, int steps, const std::vector<double>& winding_cdf,
                          Rng& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  int w = kMaxWinding;
  for (int k = 0; k < static_cast<int>(winding_cdf.size()); ++k) {
    if (u < winding_cdf[k]) {
      w = k - kMaxWinding;
      break;
    }
  }
  const double sd = std::sqrt(1.0 / steps);
  std::vector<double> b(steps + 1, 0.0);
  for (int n = 0; n < steps; ++n) b[n + 1] = b[n] + sd * normal(rng);
  const double shift = b[steps] - 2.0 * M_PI * w;
  IncrementPath inc = IncrementPath::zero(spec, steps);
  for (int n = 0; n < steps; ++n) inc.dx(n, 0) = (b[n + 1] - b[n]) - shift / steps;
  GroupPath g = ito_map(inc);
  g.points.back() = GroupElement::identity(spec);
  return g;
}

}  // namespace

BridgeSampler::BridgeSampler(const GroupSpec& spec, int steps, BridgeMethod method, int max_tries)
    : spec_(spec),
      steps_(steps),
      method_(method),
      max_tries_(max_tries),
      heat_(spec, 1.0 / std::max(steps, 1), 0.0) {
  if (steps < 2) throw std::invalid_argument("loop bridge needs N >= 2");
  if (method == BridgeMethod::Rejection) peak_ = bridge_peaks(heat_, steps);
  if (spec.id() == GroupId::U1) {
    double total = 0.0;
    for (int w = -kMaxWinding; w <= kMaxWinding; ++w) {
      total += std::exp(-2.0 * M_PI * M_PI * w * w);
      winding_cdf_.push_back(total);
    }
    for (double& c : winding_cdf_) c /= total;
  }
}

GroupPath BridgeSampler::sample(Rng& rng) const {
  if (method_ == BridgeMethod::Rejection) return bridge_impl(spec_, steps_, heat_, peak_, max_tries_, rng);
  if (spec_.id() == GroupId::U1) return skew_product_u1(spec_, steps_, winding_cdf_, rng);
  return skew_product_su2(spec_, steps_, rng);
}

GroupPath loop_bridge(Rng& rng, int steps, const HeatKernelEvaluator& heat, int max_tries) {
  if (steps < 2) throw std::invalid_argument("loop bridge needs N >= 2");
  if (heat.t_min() > 1.0 / steps) {
    std::ostringstream msg;
    msg << "loop bridge with N = " << steps << " needs heat t_min <= " << 1.0 / steps << ", have "
        << heat.t_min();
    throw TruncationError(msg.str());
  }
  return bridge_impl(heat.spec(), steps, heat, bridge_peaks(heat, steps), max_tries, rng);
}

cplx pair_field(const IncrementPath& p, const LatticeField& z, bool midpoint) {
  if (p.steps() != z.steps() || !(p.spec == z.spec())) {
    std::ostringstream msg;
    msg << "pairing size mismatch: path has " << p.steps() << " steps, field has " << z.steps();
    throw std::invalid_argument(msg.str());
  }
  const int n_steps = p.steps();
  cplx s = 0.0;
  for (int n = 0; n < n_steps; ++n) {
    if (midpoint) {
      const auto zm = 0.5 * (z.data().row(n) + z.data().row((n + 1) % n_steps));
      s += (p.dx.row(n).cast<cplx>() * zm.transpose())(0, 0);
    } else {
      s += (p.dx.row(n).cast<cplx>() * z.data().row(n).transpose())(0, 0);
    }
  }
  return s;
}

double cm_energy(const IncrementPath& w) { return w.dx.squaredNorm() / w.dt(); }

double cm_pairing(const IncrementPath& w, const IncrementPath& v) {
  if (w.steps() != v.steps()) throw std::invalid_argument("Cameron-Martin pairing size mismatch");
  return (w.dx.array() * v.dx.array()).sum() / w.dt();
}

double cm_weight_flat(const IncrementPath& v, const IncrementPath& w) {
  return std::exp(-0.5 * cm_energy(w) - cm_pairing(w, v));
}

LoopWeight::LoopWeight(const SmoothLoop& chi, int steps)
    : drift_(LatticeField::sample(chi.spec(), steps,
                                  [&](double t) {
                                    return ComplexAlgebraVector(
                                        adjoint(chi.spec(), chi.value(t), chi.log_derivative(t)));
                                  })),
      energy_(chi.energy()) {}

double LoopWeight::log_weight(const GroupPath& g) const {
  return -0.5 * energy_ - pair_field(g, drift_).real();
}

double cm_weight_loop(const GroupPath& g, const SmoothLoop& chi) {
  return LoopWeight(chi, g.steps())(g);
}

GroupPath translate(const GroupPath& g, const SmoothLoop& chi) {
  if (!(g.spec() == chi.spec())) throw std::invalid_argument("path and loop over different groups");
  std::vector<GroupElement> pts;
  pts.reserve(g.points.size());
  const int n_steps = g.steps();
  for (int n = 0; n <= n_steps; ++n) pts.push_back(g.points[n] * chi.value(double(n) / n_steps));
  return path_from_points(g.spec(), std::move(pts), g.increments.horizon);
}

}  // namespace ymc
