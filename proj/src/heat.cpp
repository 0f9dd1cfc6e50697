#include "ymc/heat.hpp"

#include <cmath>
#include <sstream>

namespace ymc {

namespace {

constexpr int kHardLabelLimit = 200000;

// log of the tail-bound term for label n.
double log_bound(GroupId id, int n, double t, double y) {
  if (id == GroupId::SU2) {
    return 2.0 * std::log(n + 1.0) + n * y - t * n * (n + 2.0) / 8.0;
  }
  return std::log(2.0) + n * y - t * double(n) * n / 2.0;
}

}  // namespace

HeatKernelEvaluator::HeatKernelEvaluator(GroupSpec spec, double t_min, double im_bound,
                                         double eps_tail)
    : spec_(spec), t_min_(t_min), im_bound_(im_bound), eps_tail_(eps_tail) {
  if (!(t_min > 0.0)) throw std::invalid_argument("heat kernel t_min must be positive");
  if (!(im_bound >= 0.0)) throw std::invalid_argument("heat kernel |Im z| bound must be >= 0");
  if (!(eps_tail > 0.0)) throw std::invalid_argument("heat kernel tail tolerance must be positive");
  label_cap_ = labels_needed(t_min, im_bound);
}

int HeatKernelEvaluator::labels_needed(double t, double y) const {
  for (int n = 0; n < kHardLabelLimit; ++n) {
    const double l1 = log_bound(spec_.id(), n + 1, t, y);
    const double l2 = log_bound(spec_.id(), n + 2, t, y);
    if (l2 < l1) {
      const double r = std::exp(l2 - l1);
      if (std::exp(l1) / (1.0 - r) < eps_tail_) return n;
    }
  }
  throw TruncationError("heat kernel tail bound never converges");
}

void HeatKernelEvaluator::check_time(double t) const {
  if (!(t >= t_min_)) {
    std::ostringstream msg;
    msg << "heat kernel time " << t << " below t_min " << t_min_
        << ": truncation at label " << label_cap_ << " is not certified";
    throw TruncationError(msg.str());
  }
}

double HeatKernelEvaluator::rho(const GroupElement& x, double t) const {
  check_time(t);
  if (spec_.id() == GroupId::U1) return rho_c(ComplexGroupElement(x), t).real();

  const double w = 0.5 * (x.m(0, 0) + x.m(1, 1)).real();
  const double step = std::exp(-t / 4.0);
  double ratio = std::exp(-3.0 * t / 8.0);  // e^{-t(lambda_{n+1}-lambda_n)/2} at n = 0
  double weight = 1.0;
  double u_prev = 0.0, u = 1.0;
  double sum = 0.0;
  for (int n = 0;; ++n) {
    sum += (n + 1) * weight * u;
    // tail bound from label n+1 on; |chi_n| <= n+1 on K
    const double b1 = (n + 2.0) * (n + 2.0) * weight * ratio;
    const double r = (n + 3.0) * (n + 3.0) / ((n + 2.0) * (n + 2.0)) * ratio * step;
    if (r < 1.0 && b1 / (1.0 - r) < eps_tail_) break;
    if (n + 1 > label_cap_) throw TruncationError("heat kernel label cap exceeded");
    const double u_next = 2.0 * w * u - u_prev;
    u_prev = u;
    u = u_next;
    weight *= ratio;
    ratio *= step;
  }
  return sum;
}

cplx HeatKernelEvaluator::rho_c(const ComplexGroupElement& sigma, double t) const {
  check_time(t);
  const double y = imaginary_extent(spec_, sigma.m);
  if (y > im_bound_ + 1e-12) {
    std::ostringstream msg;
    msg << "complexified heat kernel argument has |Im z| = " << y << " beyond the working bound "
        << im_bound_;
    throw DomainError(msg.str());
  }
  const double grow = std::exp(y);
  CharacterSequence chars(spec_, sigma.m);
  cplx sum = 0.0;
  if (spec_.id() == GroupId::SU2) {
    const double step = std::exp(-t / 4.0);
    double ratio = std::exp(-3.0 * t / 8.0);
    double weight = 1.0;
    double growth = 1.0;  // e^{n y}
    for (int n = 0;; ++n) {
      sum += (n + 1) * weight * chars.next().first;
      const double b1 = (n + 2.0) * (n + 2.0) * weight * ratio * growth * grow;
      const double r = (n + 3.0) * (n + 3.0) / ((n + 2.0) * (n + 2.0)) * ratio * step * grow;
      if (r < 1.0 && b1 / (1.0 - r) < eps_tail_) break;
      if (n + 1 > label_cap_) throw TruncationError("heat kernel label cap exceeded");
      weight *= ratio;
      ratio *= step;
      growth *= grow;
    }
    return sum;
  }
  // U(1): lambda_m = m^2, ratio e^{-t(2m+1)/2}
  const double step = std::exp(-t);
  double ratio = std::exp(-t / 2.0);
  double weight = 1.0;
  double growth = 1.0;
  for (int m = 0;; ++m) {
    const auto [pos, neg] = chars.next();
    sum += m == 0 ? pos : weight * (pos + neg);
    const double b1 = 2.0 * weight * ratio * growth * grow;
    const double r = ratio * step * grow;
    if (r < 1.0 && b1 / (1.0 - r) < eps_tail_) break;
    if (m + 1 > label_cap_) throw TruncationError("heat kernel label cap exceeded");
    weight *= ratio;
    ratio *= step;
    growth *= grow;
  }
  return sum;
}

HallState::HallState(const HeatKernelEvaluator& heat, ComplexGroupElement sigma, double hbar)
    : heat_(&heat), sigma_(std::move(sigma)), hbar_(hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("Hall state needs hbar > 0");
  const cplx n2 = heat.rho_c(sigma_.dagger() * sigma_, 2.0 * hbar);
  norm_ = std::sqrt(n2.real());
}

cplx hall_eval_unnormalized(const HallState& state, const GroupElement& k) {
  return state.heat().rho_c(ComplexGroupElement(k.inverse()) * state.sigma(), state.hbar());
}

cplx hall_eval(const HallState& state, const GroupElement& k) {
  return hall_eval_unnormalized(state, k) / state.norm();
}

cplx hall_overlap_unnormalized(const HallState& a, const HallState& b) {
  if (a.hbar() != b.hbar()) throw std::invalid_argument("Hall overlap needs equal hbar");
  return a.heat().rho_c(a.sigma().dagger() * b.sigma(), 2.0 * a.hbar());
}

cplx hall_overlap(const HallState& a, const HallState& b) {
  return hall_overlap_unnormalized(a, b) / (a.norm() * b.norm());
}

ComplexGroupElement mu_hbar_sample(const GroupSpec& spec, Rng& rng, double hbar, int steps) {
  if (steps < 1) throw std::invalid_argument("mu_hbar sampling needs at least one step");
  std::normal_distribution<double> normal;
  const double scale = std::sqrt(0.5 * hbar / steps);
  ComplexGroupElement g(haar_sample(spec, rng));
  ComplexCoeffs dz(spec.algebra_dim());
  for (int s = 0; s < steps; ++s) {
    for (int a = 0; a < spec.algebra_dim(); ++a) {
      const double re = normal(rng);
      const double im = normal(rng);
      dz(a) = scale * cplx(re, im);
    }
    g = g * exp_map(spec, ComplexAlgebraVector(dz));
  }
  return g;
}

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2) on [-1,1], halved
  }
}

QuadratureRule haar_rule(const GroupSpec& spec, int polar_nodes, int angle_nodes) {
  QuadratureRule rule;
  if (angle_nodes < 1 || (spec.id() == GroupId::SU2 && polar_nodes < 1)) {
    throw std::invalid_argument("quadrature rule needs positive node counts");
  }
  if (spec.id() == GroupId::U1) {
    for (int i = 0; i < angle_nodes; ++i) {
      rule.points.push_back({Mat::Constant(1, 1, std::polar(1.0, 2.0 * M_PI * i / angle_nodes))});
      rule.weights.push_back(1.0 / angle_nodes);
    }
    return rule;
  }
  std::vector<double> un, uw;
  gauss_legendre_unit(polar_nodes, un, uw);
  const double wa = 1.0 / (double(angle_nodes) * angle_nodes);
  for (int p = 0; p < polar_nodes; ++p) {
    const double r1 = std::sqrt(un[p]);
    const double r2 = std::sqrt(1.0 - un[p]);
    for (int i = 0; i < angle_nodes; ++i) {
      const cplx e1 = std::polar(1.0, 2.0 * M_PI * i / angle_nodes);
      for (int j = 0; j < angle_nodes; ++j) {
        const cplx e2 = std::polar(1.0, 2.0 * M_PI * j / angle_nodes);
        Mat g(2, 2);
        g(0, 0) = r1 * e1;
        g(0, 1) = r2 * e2;
        g(1, 0) = -r2 * std::conj(e2);
        g(1, 1) = r1 * std::conj(e1);
        rule.points.push_back({g});
        rule.weights.push_back(uw[p] * wa);
      }
    }
  }
  return rule;
}

namespace {

cplx apply_rule(const QuadratureRule& rule, const KFunction& f, const KFunction& g) {
  // compensated summation; rules have ~10^5 nodes
  cplx sum = 0.0, carry = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const cplx term = rule.weights[i] * std::conj(f(rule.points[i])) * g(rule.points[i]) - carry;
    const cplx next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum;
}

}  // namespace

L2Result l2k_inner_quadrature(const GroupSpec& spec, const KFunction& f, const KFunction& g,
                              const QuadratureBudget& budget) {
  const QuadratureRule full = haar_rule(spec, budget.polar_nodes, budget.angle_nodes);
  const int p_coarse = std::max(1, (3 * budget.polar_nodes) / 4);
  const int q_coarse = std::max(1, (3 * budget.angle_nodes) / 4);
  const QuadratureRule coarse = haar_rule(spec, p_coarse, q_coarse);
  const cplx value = apply_rule(full, f, g);
  const cplx check = apply_rule(coarse, f, g);
  const double err = std::abs(value - check);
  if (err > budget.tolerance * std::max(1.0, std::abs(value))) {
    std::ostringstream msg;
    msg << "L2(K) quadrature error estimate " << err << " exceeds tolerance " << budget.tolerance
        << " at budget (" << budget.polar_nodes << ", " << budget.angle_nodes << ")";
    throw BudgetError(msg.str());
  }
  return {value, err, static_cast<long>(full.points.size() + coarse.points.size())};
}

L2Result l2k_inner_mc(const GroupSpec& spec, const KFunction& f, const KFunction& g, long samples,
                      Rng& rng) {
  if (samples < 2) throw std::invalid_argument("Monte Carlo L2 pairing needs >= 2 samples");
  cplx sum = 0.0;
  double sum_sq = 0.0;
  for (long i = 0; i < samples; ++i) {
    const GroupElement k = haar_sample(spec, rng);
    const cplx v = std::conj(f(k)) * g(k);
    sum += v;
    sum_sq += std::norm(v);
  }
  const cplx mean = sum / double(samples);
  const double var = (sum_sq - samples * std::norm(mean)) / (samples - 1.0);
  return {mean, std::sqrt(std::max(var, 0.0) / samples), samples};
}

}  // namespace ymc
