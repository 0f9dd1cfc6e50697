#include <doctest.h>

#include <sstream>

#include "ymc/gauge.hpp"
#include "ymc/paths.hpp"

using namespace ymc;

namespace {

const Mat kI = Mat::Identity(2, 2);

Mat pauli(int a) {
  Mat s = Mat::Zero(2, 2);
  if (a == 0) s << 0, 1, 1, 0;
  if (a == 1) s << 0, cplx(0, -1), cplx(0, 1), 0;
  if (a == 2) s << 1, 0, 0, -1;
  return s;
}

// exp(theta X_a) with X_a = -(i/2) sigma_a.
Mat su2_axis_exp(int a, double theta) {
  return std::cos(theta / 2) * kI - cplx(0, std::sin(theta / 2)) * pauli(a);
}

Mat algebra_matrix(const RealCoeffs& c) {
  Mat m = Mat::Zero(2, 2);
  for (int a = 0; a < 3; ++a) m += cplx(0, -0.5 * c(a)) * pauli(a);
  return m;
}

RealCoeffs test_connection(double t) {
  RealCoeffs c(3);
  c << 1.3 * std::cos(2 * M_PI * t), 0.9 * std::sin(4 * M_PI * t) + 0.4, 0.7 - std::cos(2 * M_PI * t);
  return c;
}

// RK4 solution of dW/dt = -A(t) W, W(0) = 1.
Mat rk4_holonomy(double t_end, int steps) {
  Mat w = kI;
  const double h = t_end / steps;
  auto f = [](double t, const Mat& y) -> Mat { return -algebra_matrix(test_connection(t)) * y; };
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Mat k1 = f(t, w), k2 = f(t + h / 2, w + h / 2 * k1), k3 = f(t + h / 2, w + h / 2 * k2),
              k4 = f(t + h, w + h * k3);
    w += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return w;
}

LatticeField sampled(const GroupSpec& spec, int steps, double offset) {
  return LatticeField::sample(
      spec, steps, [](double t) { return ComplexAlgebraVector{test_connection(t).cast<cplx>()}; }, offset);
}

// Least-squares slope of log(err) against log(dt).
double order_fit(const std::vector<int>& ns, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = ns.size();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double x = -std::log(double(ns[i])), y = std::log(errs[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

const std::vector<int> kRefine{50, 100, 200, 400};

}  // namespace

TEST_CASE("Wilson loop closed forms") {
  const auto su2 = GroupSpec::su2(), u1 = GroupSpec::u1();
  CHECK((wilson(LatticeField(su2, 17)).m - kI).norm() == 0.0);

  const double a = 0.83;
  const LatticeField const_u1 = LatticeField::sample(u1, 40, [&](double) {
    ComplexAlgebraVector v{ComplexCoeffs(1)};
    v.c(0) = a;
    return v;
  });
  CHECK(std::abs(wilson(const_u1).m(0, 0) - std::exp(cplx(0, -a))) < 1e-12);

  const double theta = 2.1;
  const LatticeField const_su2 = LatticeField::sample(su2, 33, [&](double) {
    ComplexAlgebraVector v{ComplexCoeffs::Zero(3)};
    v.c(2) = theta;
    return v;
  });
  CHECK((wilson(const_su2).m - su2_axis_exp(2, -theta)).norm() < 1e-12);

  // two constant pieces: X_1 on [0, 1/2), X_2 on [1/2, 1); later times act on the left
  const LatticeField two_step = LatticeField::sample(su2, 8, [](double t) {
    ComplexAlgebraVector v{ComplexCoeffs::Zero(3)};
    v.c(t < 0.5 ? 0 : 1) = 1.0;
    return v;
  });
  CHECK((wilson(two_step).m - su2_axis_exp(1, -0.5) * su2_axis_exp(0, -0.5)).norm() < 1e-12);
  CHECK_THROWS(wilson(LatticeField::from_parts(const_su2, const_su2)));
}

TEST_CASE("Wilson loop refinement orders") {
  const auto su2 = GroupSpec::su2();
  const Mat exact = rk4_holonomy(1.0, 20000);
  std::vector<double> left, mid, pair_left;
  for (int n : kRefine) {
    left.push_back((wilson(sampled(su2, n, 0.0)).m - exact).norm());
    mid.push_back((wilson(sampled(su2, n, 0.5)).m - exact).norm());
    pair_left.push_back((wilson(sampled(su2, n, 0.0)).m - wilson(sampled(su2, 2 * n, 0.0)).m).norm());
  }
  const double p_left = order_fit(kRefine, left), p_mid = order_fit(kRefine, mid),
               p_pair = order_fit(kRefine, pair_left);
  MESSAGE("Wilson orders: left " << p_left << ", midpoint " << p_mid << ", N vs 2N " << p_pair);
  CHECK(p_left > 0.9);
  CHECK(p_pair > 0.9);
  CHECK(p_mid > 1.8);
  CHECK(mid.back() < left.back());
}

TEST_CASE("complexified Wilson loop") {
  const auto su2 = GroupSpec::su2(), u1 = GroupSpec::u1();
  CHECK((wilson_c(LatticeField(su2, 9)).m - kI).norm() == 0.0);

  // U(1), Z = (i/2) E: W = exp(-i (i/2) int E) = exp(int E / 2)
  const int steps = 64;
  const LatticeField z = LatticeField::sample(u1, steps, [](double t) {
    ComplexAlgebraVector v{ComplexCoeffs(1)};
    v.c(0) = cplx(0, 0.5 * (1.0 + 0.8 * std::sin(2 * M_PI * t)));
    return v;
  });
  CHECK(std::abs(wilson_c(z).m(0, 0) - std::exp(0.5)) < 1e-12);

  Rng rng(1);
  std::normal_distribution<double> normal;
  LatticeField zc(su2, 50);
  for (int n = 0; n < 50; ++n)
    for (int a = 0; a < 3; ++a) zc.data()(n, a) = cplx(normal(rng), normal(rng));
  CHECK(std::abs(wilson_c(zc).m.determinant() - 1.0) < 1e-10);

  const LatticeField real = sampled(su2, 40, 0.0);
  CHECK((wilson_c(real).m - wilson(real).m).norm() < 1e-14);
  CHECK(links_from_field(real).max_distance_to_group() < 1e-12);
  CHECK((holonomy(links_from_field(zc)).m - wilson_c(zc).m).norm() < 1e-12);
}

TEST_CASE("incomplete Wilson loop and the Ito map") {
  const auto su2 = GroupSpec::su2();
  const int steps = 100;
  const LatticeField a = sampled(su2, steps, 0.0);
  CHECK((incomplete_wilson(a, 0).m - kI).norm() == 0.0);
  CHECK((incomplete_wilson(a, steps).m - wilson(a).m).norm() == 0.0);
  CHECK_THROWS_AS(incomplete_wilson(a, steps + 1), std::out_of_range);
  CHECK_THROWS_AS(incomplete_wilson(a, -1), std::out_of_range);

  // the increments dX_n = dt A_n drive the Ito map to the inverse of the incomplete loop
  IncrementPath inc = IncrementPath::zero(su2, steps);
  for (int n = 0; n < steps; ++n) inc.dx.row(n) = a.dt() * a.a_part(n).c.transpose();
  const GroupPath g = ito_map(inc);
  double worst = 0.0;
  for (int m = 0; m <= steps; ++m) worst = std::max(worst, (incomplete_wilson(a, m).m * g.points[m].m - kI).norm());
  CHECK(worst < 1e-12);
}

TEST_CASE("gauge action: identity, group law, Wilson invariance") {
  const auto su2 = GroupSpec::su2();
  Rng rng(2);
  const SmoothLoop chi = SmoothLoop::random(su2, rng, 2, 2, 0.5), eta = SmoothLoop::random(su2, rng, 2, 3, 0.5);
  const SmoothLoop trivial(su2);
  std::normal_distribution<double> normal;
  LatticeField z = sampled(su2, 64, 0.0);
  for (int n = 0; n < 64; ++n)
    for (int a = 0; a < 3; ++a) z.data()(n, a) += cplx(0, 0.3 * normal(rng));

  CHECK((gauge_transform(z, trivial).data() - z.data()).norm() == 0.0);
  // (Z^chi)^eta = Z^{eta chi} with (eta chi)(t) = eta(t) chi(t)
  const double law = (gauge_transform(gauge_transform(z, chi), eta).data() - gauge_transform(z, eta * chi).data())
                         .cwiseAbs()
                         .maxCoeff();
  const double law2 = (gauge_transform(gauge_transform(z, eta), chi).data() - gauge_transform(z, chi * eta).data())
                          .cwiseAbs()
                          .maxCoeff();
  const double other = (gauge_transform(gauge_transform(z, chi), eta).data() - gauge_transform(z, chi * eta).data())
                           .cwiseAbs()
                           .maxCoeff();
  CHECK(law < 1e-10);
  CHECK(law2 < 1e-10);
  CHECK(other > 1e-3);

  std::vector<double> real_err, complex_err, mid_err;
  for (int n : kRefine) {
    const LatticeField a = sampled(su2, n, 0.0);
    real_err.push_back((wilson(gauge_transform(a, chi)).m - wilson(a).m).norm());
    LatticeField zc = a;
    for (int k = 0; k < n; ++k) zc.data()(k, 1) += cplx(0, 0.4 * std::cos(2 * M_PI * a.time(k)));
    complex_err.push_back((wilson_c(gauge_transform(zc, chi)).m - wilson_c(zc).m).norm());
    const LatticeField am = sampled(su2, n, 0.5);
    mid_err.push_back((wilson(gauge_transform(am, chi)).m - wilson(am).m).norm());
  }
  const double p_real = order_fit(kRefine, real_err), p_c = order_fit(kRefine, complex_err),
               p_mid = order_fit(kRefine, mid_err);
  MESSAGE("invariance orders: real " << p_real << ", complex " << p_c << ", midpoint " << p_mid
                                     << "; errors at N=400: " << real_err.back() << " " << complex_err.back()
                                     << " " << mid_err.back());
  CHECK(p_real > 0.9);
  CHECK(p_c > 0.9);
  CHECK(p_mid > 1.8);
}

TEST_CASE("U(1) Gauss-law field: invariance up to rounding") {
  // E constant solves the abelian Gauss law; based loops have zero winding, so the sum of the
  // shifts is a periodic trapezoid sum of a derivative and vanishes
  const auto u1 = GroupSpec::u1();
  Rng rng(3);
  const SmoothLoop chi = SmoothLoop::random(u1, rng, 1, 3, 0.8);
  const LatticeField z = LatticeField::sample(u1, 50, [](double t) {
    ComplexAlgebraVector v{ComplexCoeffs(1)};
    v.c(0) = cplx(std::sin(2 * M_PI * t) + 0.3, 0.35);
    return v;
  });
  for (const auto& c : gauss_law(z)) CHECK(c.c.norm() < 1e-12);
  CHECK(std::abs(wilson_c(gauge_transform(z, chi)).m(0, 0) - wilson_c(z).m(0, 0)) < 1e-12);
}

TEST_CASE("link gauge action is exact") {
  const auto su2 = GroupSpec::su2();
  Rng rng(4);
  const int steps = 37;
  const SmoothLoop chi = SmoothLoop::random(su2, rng, 3, 2, 0.7);
  LatticeField z = sampled(su2, steps, 0.0);
  const LinkConfiguration u = links_from_field(z);

  const auto unchanged = gauge_transform_links(u, std::vector<GroupElement>(steps + 1, GroupElement::identity(su2)));
  for (int n = 0; n < steps; ++n) CHECK((unchanged.links[n].m - u.links[n].m).norm() == 0.0);

  const LinkConfiguration moved = gauge_transform_links(u, site_values(chi, steps));
  CHECK((holonomy(moved).m - holonomy(u).m).norm() < 1e-12);
  CHECK(moved.max_distance_to_group() < 1e-12);

  // unbased sites with g_0 = g_N: the holonomy is conjugated, its trace is unchanged
  std::vector<GroupElement> sites;
  for (int n = 0; n < steps; ++n) sites.push_back(haar_sample(su2, rng));
  sites.push_back(sites.front());
  const LinkConfiguration conj = gauge_transform_links(u, sites);
  CHECK(std::abs(holonomy(conj).m.trace() - holonomy(u).m.trace()) < 1e-12);
  CHECK((holonomy(conj).m - holonomy(u).m).norm() > 1e-3);
  CHECK_THROWS(gauge_transform_links(u, std::vector<GroupElement>(steps, GroupElement::identity(su2))));

  // link and field actions agree slice by slice up to O(dt^2)
  auto link_gap = [&](int n) {
    const LatticeField zn = sampled(su2, n, 0.0);
    const LinkConfiguration a = links_from_field(gauge_transform(zn, chi)),
                            b = gauge_transform_links(links_from_field(zn), site_values(chi, n));
    double worst = 0.0;
    for (int k = 0; k < n; ++k) worst = std::max(worst, (a.links[k].m - b.links[k].m).norm());
    return worst;
  };
  const double g1 = link_gap(100), g2 = link_gap(200);
  MESSAGE("link vs field action gap " << g1 << " -> " << g2);
  CHECK(g1 / g2 > 3.5);
}

TEST_CASE("Gauss law: zero cases and covariance") {
  const auto su2 = GroupSpec::su2(), u1 = GroupSpec::u1();
  for (const auto& c : gauss_law(sampled(su2, 30, 0.0))) CHECK(c.c.norm() == 0.0);
  const LatticeField abelian = LatticeField::sample(u1, 20, [](double) {
    ComplexAlgebraVector v{ComplexCoeffs(1)};
    v.c(0) = cplx(0.7, -0.2);
    return v;
  });
  for (const auto& c : gauss_law(abelian)) CHECK(c.c.norm() < 1e-13);

  Rng rng(5);
  const SmoothLoop chi = SmoothLoop::random(su2, rng, 2, 2, 0.5);
  auto field = [](int n) {
    return LatticeField::sample(GroupSpec::su2(), n, [](double t) {
      ComplexAlgebraVector v{test_connection(t).cast<cplx>()};
      v.c(0) += cplx(0, 0.5 * std::sin(2 * M_PI * t));
      v.c(2) += cplx(0, 0.3 + 0.2 * std::cos(4 * M_PI * t));
      return v;
    });
  };
  std::vector<double> errs;
  for (int n : kRefine) {
    const LatticeField z = field(n);
    const auto c = gauss_law(z), ct = gauss_law(gauge_transform(z, chi));
    double worst = 0.0;
    for (int k = 0; k < n; ++k)
      worst = std::max(worst, (ct[k].c - adjoint(su2, chi.value(z.time(k)), c[k]).c).norm());
    errs.push_back(worst);
  }
  const double p = order_fit(kRefine, errs);
  MESSAGE("Gauss-law covariance order " << p << ", error at N=400 " << errs.back());
  CHECK(p > 0.9);
}

TEST_CASE("field ensemble text round trip") {
  const auto su2 = GroupSpec::su2(), u1 = GroupSpec::u1();
  Rng rng(6);
  std::normal_distribution<double> normal;
  LatticeField a(su2, 7, 0.5), b(u1, 5);
  for (int n = 0; n < 7; ++n)
    for (int k = 0; k < 3; ++k) a.data()(n, k) = cplx(normal(rng), normal(rng)) * 1e3;
  for (int n = 0; n < 5; ++n) b.data()(n, 0) = cplx(normal(rng), 1e-300 * normal(rng));
  std::stringstream ss;
  write_fields(ss, {a, b});
  const auto back = read_fields(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].data() == a.data());
  CHECK(back[1].data() == b.data());
  CHECK(back[0].offset() == 0.5);
  CHECK(back[1].spec().id() == GroupId::U1);

  std::stringstream bad("# ymc-fields 1\n# field 0 group su2 steps 2 offset 0\n0 0 1.0 zz\n");
  try {
    read_fields(bad);
    FAIL("malformed input accepted");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}
