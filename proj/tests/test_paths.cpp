#include <doctest.h>

#include <algorithm>

#include "ymc/paths.hpp"

using namespace ymc;

namespace {

struct Moments {
  double sum = 0, sum_sq = 0;
  long n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return sum / n; }
  double se() const { return std::sqrt(std::max(sum_sq / n - mean() * mean(), 0.0) / (n - 1)); }
};

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// CDF on (-pi, pi] of a Normal(0, var) angle wrapped onto the circle.
double wrapped_normal_cdf(double x, double var) {
  double s = 0.0;
  const double sd = std::sqrt(var);
  for (int k = -10; k <= 10; ++k)
    s += normal_cdf((x + 2 * M_PI * k) / sd) - normal_cdf((-M_PI + 2 * M_PI * k) / sd);
  return s;
}

double ks_two_sample(std::vector<double> x, std::vector<double> y) {
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] <= y[j]) ++i;
    else ++j;
    d = std::max(d, std::abs(double(i) / x.size() - double(j) / y.size()));
  }
  return d;
}

double chi_half(const GroupElement& g) { return (g.m(0, 0) + g.m(1, 1)).real(); }

// Increments of a smooth loop sampled on N steps.
IncrementPath loop_increments(const SmoothLoop& chi, int steps) {
  std::vector<GroupElement> pts;
  for (int n = 0; n <= steps; ++n) pts.push_back(chi.value(double(n) / steps));
  return path_from_points(chi.spec(), pts).increments;
}

}  // namespace

TEST_CASE("increment sampler moments and determinism") {
  const auto su2 = GroupSpec::su2();
  Rng rng(1);
  Moments m1, m2, total;
  for (int i = 0; i < 100000; ++i) {
    const IncrementPath p = sample_increments(rng, 4, 2.0, su2);
    m1.add(p.dx(0, 0));
    m2.add(p.dx(0, 0) * p.dx(0, 0));
    const double s = p.dx.col(1).sum();
    total.add(s * s);
  }
  CHECK(std::abs(m1.mean()) < 3 * m1.se());
  CHECK(std::abs(m2.mean() - 0.5) < 3 * m2.se());
  CHECK(std::abs(total.mean() - 2.0) < 3 * total.se());

  Rng a(42), b(42), c(43);
  const auto pa = sample_increments(a, 50, 1.0, su2), pb = sample_increments(b, 50, 1.0, su2),
             pc = sample_increments(c, 50, 1.0, su2);
  CHECK(pa.dx == pb.dx);
  CHECK(pa.dx != pc.dx);
}

TEST_CASE("Ito map: zero path and heat-kernel marginals") {
  const auto su2 = GroupSpec::su2();
  const GroupPath zero = ito_map(IncrementPath::zero(su2, 10));
  for (const auto& g : zero.points) CHECK((g.m - Mat::Identity(2, 2)).norm() == 0.0);

  Rng rng(2);
  const double expected = 2.0 * std::exp(-casimir(su2, 1) / 2.0);
  Moments coarse, fine;
  for (int i = 0; i < 40000; ++i) coarse.add(chi_half(ito_map(sample_increments(rng, 100, 1.0, su2)).points.back()));
  for (int i = 0; i < 40000; ++i) fine.add(chi_half(ito_map(sample_increments(rng, 400, 1.0, su2)).points.back()));
  CHECK(std::abs(coarse.mean() - expected) < 3 * coarse.se());
  CHECK(std::abs(fine.mean() - expected) < 3 * fine.se());
  CHECK(std::abs(coarse.mean() - fine.mean()) < 3 * std::hypot(coarse.se(), fine.se()));
  // the marginal prediction itself: E chi_{1/2}(g_1) = int chi_{1/2} rho(., 1) dk
  const HeatKernelEvaluator heat(su2);
  const auto q = l2k_inner_quadrature(
      su2, [](const GroupElement& k) { return cplx(chi_half(k)); },
      [&](const GroupElement& k) { return cplx(heat.rho(k, 1.0)); });
  CHECK(std::abs(q.value - expected) < 1e-10);
}

TEST_CASE("Ito map on U(1): wrapped normal endpoint") {
  const auto u1 = GroupSpec::u1();
  Rng rng(3);
  std::vector<double> angles;
  for (int i = 0; i < 20000; ++i)
    angles.push_back(std::arg(ito_map(sample_increments(rng, 20, 3.0, u1)).points.back().m(0, 0)));
  std::sort(angles.begin(), angles.end());
  double d = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double f = wrapped_normal_cdf(angles[i], 3.0);
    d = std::max({d, std::abs(f - double(i) / angles.size()), std::abs(f - double(i + 1) / angles.size())});
  }
  CHECK(d < 1.63 / std::sqrt(double(angles.size())));
}

// E chi_{1/2}(g_s^{-1} g_t) under the bridge, from the character expansion of
// rho(a, s) rho(a^{-1} b, t - s) rho(b, 1 - t) / rho(e, 1).
double bridge_two_time(const GroupSpec& su2, double s, double t, double rho_e1) {
  double num = 0.0;
  for (int i = 0; i < 80; ++i) {
    for (int j : {i - 1, i + 1}) {
      if (j < 0) continue;
      num += (i + 1.0) * (j + 1.0) * std::exp(-((s + 1 - t) * casimir(su2, i) + (t - s) * casimir(su2, j)) / 2.0);
    }
  }
  return num / rho_e1;
}

TEST_CASE("loop bridge: pinning, marginals, two-time law, reversibility") {
  const auto su2 = GroupSpec::su2();
  const int steps = 64;
  const BridgeSampler bridge(su2, steps);
  Rng rng(4);
  Moments mid, near, far;
  std::vector<double> early, late;
  for (int i = 0; i < 40000; ++i) {
    const GroupPath g = bridge.sample(rng);
    CHECK_MESSAGE((g.points.back().m - Mat::Identity(2, 2)).norm() == 0.0, "bridge endpoint not e");
    const GroupElement& q = g.points[steps / 4];
    mid.add(chi_half(g.points[steps / 2]));
    near.add(chi_half(q.inverse() * g.points[steps / 2]));
    far.add(chi_half(q.inverse() * g.points[3 * steps / 4]));
    if (i % 2 == 0) early.push_back(chi_half(q));
    else late.push_back(chi_half(g.points[3 * steps / 4]));
  }
  const double rho_e1 = bridge.heat().rho(GroupElement::identity(su2), 1.0);
  // g_{1/2} has density rho(x, 1/2)^2 / rho(e, 1), which is the two-time formula with s = 0
  const double predicted = bridge_two_time(su2, 0.0, 0.5, rho_e1);
  MESSAGE("bridge midpoint E chi_1/2 = " << mid.mean() << " +- " << mid.se() << ", predicted " << predicted);
  CHECK(std::abs(mid.mean() - predicted) < 3 * mid.se());
  const double p_near = bridge_two_time(su2, 0.25, 0.5, rho_e1), p_far = bridge_two_time(su2, 0.25, 0.75, rho_e1);
  MESSAGE("two-time: " << near.mean() << " +- " << near.se() << " vs " << p_near << "; " << far.mean()
                       << " +- " << far.se() << " vs " << p_far);
  CHECK(std::abs(near.mean() - p_near) < 3 * near.se());
  CHECK(std::abs(far.mean() - p_far) < 3 * far.se());
  CHECK(ks_two_sample(early, late) < 1.63 * std::sqrt(2.0 / early.size()));
}

TEST_CASE("rejection bridge agrees with the exact bridge at small N") {
  const auto su2 = GroupSpec::su2();
  const int steps = 8;
  const BridgeSampler exact(su2, steps), rejection(su2, steps, BridgeMethod::Rejection);
  Rng rng(12);
  Moments a, b;
  for (int i = 0; i < 20000; ++i) {
    a.add(chi_half(exact.sample(rng).points[steps / 2]));
    const GroupPath g = rejection.sample(rng);
    CHECK((g.points.back().m - Mat::Identity(2, 2)).norm() == 0.0);
    b.add(chi_half(g.points[steps / 2]));
  }
  MESSAGE("midpoint: exact " << a.mean() << " +- " << a.se() << ", rejection " << b.mean() << " +- " << b.se());
  // the rejection sampler uses Gaussian steps rather than heat-kernel steps, an O(1/N) difference
  CHECK(std::abs(a.mean() - b.mean()) < 3 * std::hypot(a.se(), b.se()) + 0.02);

  const HeatKernelEvaluator coarse_heat(su2);
  CHECK_THROWS_AS(loop_bridge(rng, 64, coarse_heat), TruncationError);
  const HeatKernelEvaluator fine_heat(su2, 1.0 / steps, 0.0);
  const GroupPath g = loop_bridge(rng, steps, fine_heat);
  CHECK((g.points.back().m - Mat::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("U(1) bridge winding sectors") {
  // sector masses are proportional to e^{-2 pi^2 w^2}; all but w = 0 are below 1e-8
  const auto u1 = GroupSpec::u1();
  const BridgeSampler bridge(u1, 50);
  Rng rng(5);
  int zero = 0;
  const int m = 5000;
  for (int i = 0; i < m; ++i) {
    const GroupPath g = bridge.sample(rng);
    const double w = g.increments.dx.sum() / (2 * M_PI);
    CHECK(std::abs(w - std::round(w)) < 1e-9);
    if (std::round(w) == 0) ++zero;
  }
  const double p0 = 1.0 / (1.0 + 2.0 * std::exp(-2 * M_PI * M_PI) + 2.0 * std::exp(-8 * M_PI * M_PI));
  const double se = std::sqrt(p0 * (1 - p0) / m);
  CHECK(std::abs(double(zero) / m - p0) <= 3 * se + 1.0 / m);
}

TEST_CASE("pairing: isometry and smooth limit") {
  const auto su2 = GroupSpec::su2();
  const int steps = 32;
  const auto f1 = LatticeField::sample(su2, steps, [](double t) {
    ComplexCoeffs c(3);
    c << std::sin(2 * M_PI * t), 1.0, t;
    return ComplexAlgebraVector{c};
  });
  const auto f2 = LatticeField::sample(su2, steps, [](double t) {
    ComplexCoeffs c(3);
    c << 0.5, std::cos(2 * M_PI * t), -t * t;
    return ComplexAlgebraVector{c};
  });
  CHECK(pair_field(IncrementPath::zero(su2, steps), f1) == cplx(0.0));
  Rng rng(6);
  CHECK(pair_field(sample_increments(rng, steps, 1.0, su2), LatticeField(su2, steps)) == cplx(0.0));
  Moments prod;
  for (int i = 0; i < 100000; ++i) {
    const IncrementPath v = sample_increments(rng, steps, 1.0, su2);
    prod.add((pair_field(v, f1) * pair_field(v, f2)).real());
  }
  const double l2 = (f1.data().conjugate().cwiseProduct(f2.data())).sum().real() / steps;
  CHECK(std::abs(prod.mean() - l2) < 3 * prod.se());

  // smooth path: sum -> int <chi', Z>
  Rng lrng(7);
  const SmoothLoop chi = SmoothLoop::random(su2, lrng, 2, 2, 0.5);
  const auto z_of_t = [](double t) {
    ComplexCoeffs c(3);
    c << std::cos(2 * M_PI * t), cplx(0.3, 1.0) * std::sin(4 * M_PI * t), 0.2;
    return ComplexAlgebraVector{c};
  };
  cplx exact = 0.0;
  const int fine = 4096;
  for (int i = 0; i < fine; ++i) {
    const double t = double(i) / fine;
    exact += inner(ComplexAlgebraVector(chi.log_derivative(t)), z_of_t(t));
  }
  exact /= double(fine);
  double err_left[2], err_mid[2];
  for (int k = 0; k < 2; ++k) {
    const int n = 100 * (k + 1);
    const auto inc = loop_increments(chi, n);
    err_left[k] = std::abs(pair_field(inc, LatticeField::sample(su2, n, z_of_t)) - exact);
    err_mid[k] = std::abs(pair_field(inc, LatticeField::sample(su2, n, z_of_t), true) - exact);
  }
  MESSAGE("left-point errors " << err_left[0] << " " << err_left[1] << ", midpoint " << err_mid[0]
                               << " " << err_mid[1]);
  CHECK(err_left[0] / err_left[1] > 1.8);
  CHECK(err_left[1] < 0.1);
  CHECK(err_mid[1] < err_left[1]);
}

TEST_CASE("flat Cameron-Martin weight") {
  const auto su2 = GroupSpec::su2();
  const int steps = 16;
  IncrementPath w = IncrementPath::zero(su2, steps);
  for (int n = 0; n < steps; ++n) {
    w.dx(n, 0) = 0.5 * std::sin(2 * M_PI * n / steps) / steps;
    w.dx(n, 2) = 0.3 / steps;
  }
  // theta(v) = sum <theta_n, Delta v_n>, characteristic function e^{-Q/2}
  Eigen::MatrixXd theta(steps, 3);
  for (int n = 0; n < steps; ++n) theta.row(n) << 1.0, -0.5 * n / steps, 0.7;
  const double q = theta.squaredNorm() / steps;
  const double shift = (theta.array() * w.dx.array()).sum();

  Rng rng(8);
  Moments weight, logw, re_plus, im_plus, re_minus, im_minus;
  const double energy = cm_energy(w);
  CHECK(cm_weight_flat(sample_increments(rng, steps, 1.0, su2), IncrementPath::zero(su2, steps)) == 1.0);
  for (int i = 0; i < 100000; ++i) {
    const IncrementPath v = sample_increments(rng, steps, 1.0, su2);
    const double wt = cm_weight_flat(v, w);
    weight.add(wt);
    logw.add(std::log(wt));
    IncrementPath vw = v;
    vw.dx += w.dx;
    const double phase_shifted = (theta.array() * vw.dx.array()).sum();
    const double phase = (theta.array() * v.dx.array()).sum();
    re_plus.add(std::cos(phase_shifted) * wt);  // E[f(v + w) W(v)] = E[f(v)]
    im_plus.add(std::sin(phase_shifted) * wt);
    re_minus.add(std::cos(phase) * wt);  // E[f(v) W(v)] = E[f(v - w)]
    im_minus.add(std::sin(phase) * wt);
  }
  CHECK(std::abs(weight.mean() - 1.0) < 3 * weight.se());
  CHECK(std::abs(logw.mean() + 0.5 * energy) < 3 * logw.se());
  const double var = logw.sum_sq / logw.n - logw.mean() * logw.mean();
  CHECK(std::abs(var - energy) < 3 * energy * std::sqrt(2.0 / logw.n));
  const cplx plus_expected = std::exp(-0.5 * q);
  const cplx minus_expected = std::exp(cplx(-0.5 * q, -shift));
  CHECK(std::abs(re_plus.mean() - plus_expected.real()) < 3 * re_plus.se());
  CHECK(std::abs(im_plus.mean() - plus_expected.imag()) < 3 * im_plus.se());
  CHECK(std::abs(re_minus.mean() - minus_expected.real()) < 3 * re_minus.se());
  CHECK(std::abs(im_minus.mean() - minus_expected.imag()) < 3 * im_minus.se());
}

TEST_CASE("smooth loops") {
  const auto su2 = GroupSpec::su2();
  Rng rng(9);
  const SmoothLoop chi = SmoothLoop::random(su2, rng, 3, 2, 0.8);
  CHECK((chi.value(0.0).m - Mat::Identity(2, 2)).norm() == 0.0);
  CHECK((chi.value(1.0).m - Mat::Identity(2, 2)).norm() == 0.0);
  for (double t : {0.1, 0.37, 0.8}) {
    const double h = 1e-6;
    const Mat fd = chi.value(t).m.adjoint() * (chi.value(t + h).m - chi.value(t - h).m) / (2 * h);
    CHECK((from_matrix(su2, fd).real() - chi.log_derivative(t).c).norm() < 1e-8);
    const SmoothLoop eta = SmoothLoop::random(su2, rng, 2, 1, 0.5);
    CHECK(((chi * eta).value(t).m - chi.value(t).m * eta.value(t).m).norm() < 1e-13);
    CHECK(((chi * chi.inverse()).value(t).m - Mat::Identity(2, 2)).norm() < 1e-13);
  }
  CHECK(std::abs(chi.energy(1024) - chi.energy(4096)) < 1e-10);
  CHECK(SmoothLoop(su2).energy() == 0.0);
}

TEST_CASE("translate and the loop Cameron-Martin weight") {
  const auto su2 = GroupSpec::su2();
  const int steps = 50;
  const BridgeSampler bridge(su2, steps);
  Rng rng(10);
  const GroupPath g0 = bridge.sample(rng);
  const SmoothLoop trivial(su2);
  const GroupPath same = translate(g0, trivial);
  for (int n = 0; n <= steps; ++n) CHECK((same.points[n].m - g0.points[n].m).norm() == 0.0);
  CHECK(cm_weight_loop(g0, trivial) == 1.0);

  Rng lrng(11);
  const SmoothLoop chi = SmoothLoop::random(su2, lrng, 2, 2, 0.15);
  MESSAGE("loop energy " << chi.energy());
  const GroupPath moved = translate(g0, chi);
  CHECK((moved.points.back().m - Mat::Identity(2, 2)).norm() == 0.0);
  const GroupPath back = translate(moved, chi.inverse());
  for (int n = 0; n <= steps; ++n) CHECK((back.points[n].m - g0.points[n].m).norm() < 1e-12);

  const LoopWeight weight(chi, steps);
  Moments unit, lhs, rhs, diff;
  for (int i = 0; i < 20000; ++i) {
    const GroupPath g = bridge.sample(rng);
    const double w = weight(g);
    unit.add(w);
    const double a = chi_half(translate(g, chi).points[steps / 2]) * w;
    const double b = chi_half(g.points[steps / 2]);
    lhs.add(a);
    rhs.add(b);
    diff.add(a - b);
  }
  MESSAGE("E[weight] = " << unit.mean() << " +- " << unit.se() << "; E[F(g chi) W] - E[F(g)] = "
                         << diff.mean() << " +- " << diff.se());
  CHECK(std::abs(unit.mean() - 1.0) < 3 * unit.se());
  CHECK(std::abs(diff.mean()) < 3 * diff.se());
}
