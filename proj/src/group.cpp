#include "ymc/group.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace ymc {

namespace {

constexpr cplx I{0.0, 1.0};

const std::array<Mat, 3>& su2_basis() {
  static const std::array<Mat, 3> basis = [] {
    std::array<Mat, 3> b;
    for (auto& m : b) m = Mat::Zero(2, 2);
    // -(i/2) sigma_a
    b[0](0, 1) = -0.5 * I;
    b[0](1, 0) = -0.5 * I;
    b[1](0, 1) = -0.5;
    b[1](1, 0) = 0.5;
    b[2](0, 0) = -0.5 * I;
    b[2](1, 1) = 0.5 * I;
    return b;
  }();
  return basis;
}

const Mat& u1_basis() {
  static const Mat basis = Mat::Constant(1, 1, I);
  return basis;
}

cplx ipow(cplx base, int e) {
  cplx r{1.0, 0.0};
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// cosh(sqrt(q)) and sinh(sqrt(q))/sqrt(q); both even in sqrt(q).
std::pair<cplx, cplx> cosh_sinhc(cplx q) {
  if (std::abs(q) < 1e-3) {
    cplx c{1.0}, s{1.0}, term_c{1.0}, term_s{1.0};
    for (int k = 1; k < 10; ++k) {
      term_c *= q / double((2 * k - 1) * (2 * k));
      term_s *= q / double((2 * k) * (2 * k + 1));
      c += term_c;
      s += term_s;
    }
    return {c, s};
  }
  const cplx r = std::sqrt(q);
  return {std::cosh(r), std::sinh(r) / r};
}

}  // namespace

GroupSpec GroupSpec::from_name(std::string_view name) {
  if (name == "u1" || name == "U1") return u1();
  if (name == "su2" || name == "SU2") return su2();
  throw std::invalid_argument("unknown group '" + std::string(name) + "' (expected u1 or su2)");
}

const Mat& GroupSpec::basis(int a) const {
  if (id_ == GroupId::U1) return u1_basis();
  return su2_basis()[static_cast<std::size_t>(a)];
}

ComplexGroupElement ComplexGroupElement::inverse() const {
  if (m.rows() == 1) return {Mat::Constant(1, 1, 1.0 / m(0, 0))};
  Mat r(2, 2);
  const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  r(0, 0) = m(1, 1) / det;
  r(0, 1) = -m(0, 1) / det;
  r(1, 0) = -m(1, 0) / det;
  r(1, 1) = m(0, 0) / det;
  return {r};
}

Mat to_matrix(const GroupSpec& spec, const ComplexCoeffs& c) {
  const int d = spec.matrix_dim();
  Mat x = Mat::Zero(d, d);
  for (int a = 0; a < spec.algebra_dim(); ++a) x += c(a) * spec.basis(a);
  return x;
}

ComplexCoeffs from_matrix(const GroupSpec& spec, const Mat& x) {
  ComplexCoeffs c(spec.algebra_dim());
  for (int a = 0; a < spec.algebra_dim(); ++a) {
    c(a) = -spec.trace_scale() * (spec.basis(a) * x).trace();
  }
  return c;
}

Mat exp_matrix(const GroupSpec& spec, const Mat& x) {
  if (spec.id() == GroupId::U1) return Mat::Constant(1, 1, std::exp(x(0, 0)));
  const cplx half_trace = 0.5 * (x(0, 0) + x(1, 1));
  Mat x0 = x;
  x0(0, 0) -= half_trace;
  x0(1, 1) -= half_trace;
  // traceless: x0^2 = -det(x0) I
  const cplx q = -(x0(0, 0) * x0(1, 1) - x0(0, 1) * x0(1, 0));
  const auto [ch, shc] = cosh_sinhc(q);
  Mat r = shc * x0;
  r(0, 0) += ch;
  r(1, 1) += ch;
  if (half_trace != cplx{0.0}) r *= std::exp(half_trace);
  return r;
}

GroupElement exp_map(const GroupSpec& spec, const AlgebraVector& x) {
  return {exp_matrix(spec, to_matrix(spec, x.c.cast<cplx>()))};
}

ComplexGroupElement exp_map(const GroupSpec& spec, const ComplexAlgebraVector& x) {
  return {exp_matrix(spec, to_matrix(spec, x.c))};
}

AlgebraVector log_map(const GroupSpec& spec, const GroupElement& g) {
  if (spec.id() == GroupId::U1) {
    RealCoeffs c(1);
    c(0) = std::arg(g.m(0, 0));
    return {c};
  }
  const double half_tr = std::clamp(0.5 * (g.m(0, 0) + g.m(1, 1)).real(), -1.0, 1.0);
  const double s = std::acos(half_tr);
  const double factor = s < 1e-6 ? 1.0 + s * s / 6.0 : s / std::sin(s);
  const Mat anti = 0.5 * (g.m - g.m.adjoint());
  return {(factor * from_matrix(spec, anti)).real()};
}

ComplexAlgebraVector adjoint(const GroupSpec& spec, const GroupElement& g,
                             const ComplexAlgebraVector& x) {
  if (spec.id() == GroupId::U1) return x;
  return {from_matrix(spec, g.m * to_matrix(spec, x.c) * g.m.adjoint())};
}

AlgebraVector adjoint(const GroupSpec& spec, const GroupElement& g, const AlgebraVector& x) {
  if (spec.id() == GroupId::U1) return x;
  return {from_matrix(spec, g.m * to_matrix(spec, x.c.cast<cplx>()) * g.m.adjoint()).real()};
}

cplx inner(const ComplexAlgebraVector& x, const ComplexAlgebraVector& y) {
  return x.c.dot(y.c);  // Eigen's dot conjugates the first argument
}

cplx bilinear(const ComplexAlgebraVector& x, const ComplexAlgebraVector& y) {
  return (x.c.transpose() * y.c)(0, 0);
}

ComplexAlgebraVector bracket(const GroupSpec& spec, const ComplexAlgebraVector& x,
                             const ComplexAlgebraVector& y) {
  if (spec.id() == GroupId::U1) return ComplexAlgebraVector::zero(spec);
  const Mat mx = to_matrix(spec, x.c);
  const Mat my = to_matrix(spec, y.c);
  return {from_matrix(spec, mx * my - my * mx)};
}

int rep_dimension(const GroupSpec& spec, int label) {
  if (spec.id() == GroupId::U1) return 1;
  if (label < 0) throw std::invalid_argument("SU(2) label must be non-negative");
  return label + 1;
}

double casimir(const GroupSpec& spec, int label) {
  if (spec.id() == GroupId::U1) return double(label) * label;
  if (label < 0) throw std::invalid_argument("SU(2) label must be non-negative");
  const double j = 0.5 * label;
  return j * (j + 1.0);
}

cplx character(const GroupSpec& spec, int label, const ComplexGroupElement& sigma) {
  if (spec.id() == GroupId::U1) {
    const cplx s = sigma.m(0, 0);
    return label >= 0 ? ipow(s, label) : ipow(1.0 / s, -label);
  }
  if (label < 0) throw std::invalid_argument("SU(2) label must be non-negative");
  const cplx w = 0.5 * (sigma.m(0, 0) + sigma.m(1, 1));
  const cplx z = std::acos(w);
  const cplx sz = std::sin(z);
  if (std::abs(sz) >= 1e-4) return std::sin(double(label + 1) * z) / sz;
  // near z = 0 or z = pi: Chebyshev polynomial U_n(w)
  cplx prev{1.0}, cur = 2.0 * w;
  if (label == 0) return prev;
  for (int n = 1; n < label; ++n) {
    const cplx nxt = 2.0 * w * cur - prev;
    prev = cur;
    cur = nxt;
  }
  return cur;
}

double imaginary_extent(const GroupSpec& spec, const Mat& sigma) {
  if (spec.id() == GroupId::U1) return std::abs(std::log(std::abs(sigma(0, 0))));
  const cplx w = 0.5 * (sigma(0, 0) + sigma(1, 1));
  const cplx lambda = w + std::sqrt(w * w - 1.0);
  return std::abs(std::log(std::abs(lambda)));
}

CharacterSequence::CharacterSequence(const GroupSpec& spec, const Mat& sigma) : id_(spec.id()) {
  if (id_ == GroupId::U1) {
    s_ = sigma(0, 0);
    s_inv_ = 1.0 / s_;
  } else {
    w_ = 0.5 * (sigma(0, 0) + sigma(1, 1));
    prev_ = 0.0;
    cur_ = 1.0;
  }
}

std::pair<cplx, cplx> CharacterSequence::next() {
  if (id_ == GroupId::U1) {
    std::pair<cplx, cplx> out{pos_, neg_};
    pos_ *= s_;
    neg_ *= s_inv_;
    ++label_;
    return out;
  }
  const cplx out = cur_;
  const cplx nxt = 2.0 * w_ * cur_ - prev_;
  prev_ = cur_;
  cur_ = nxt;
  ++label_;
  return {out, 0.0};
}

GroupElement haar_sample(const GroupSpec& spec, Rng& rng) {
  if (spec.id() == GroupId::U1) {
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    return {Mat::Constant(1, 1, std::polar(1.0, angle(rng)))};
  }
  std::normal_distribution<double> normal;
  double a[4];
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : a) {
      x = normal(rng);
      norm2 += x * x;
    }
  } while (norm2 < 1e-300);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : a) x *= inv;
  Mat g(2, 2);
  g(0, 0) = {a[0], a[3]};
  g(0, 1) = {a[2], a[1]};
  g(1, 0) = {-a[2], a[1]};
  g(1, 1) = {a[0], -a[3]};
  return {g};
}

Eigen::MatrixXcd spin_rep(int two_j, const Mat& g) {
  const int n = two_j;
  const cplx a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    for (int p = 0; p <= n - k; ++p) {
      const cplx left = binomial(n - k, p) * ipow(a, n - k - p) * ipow(c, p);
      for (int q = 0; q <= k; ++q) {
        m(p + q, k) += left * binomial(k, q) * ipow(b, k - q) * ipow(d, q);
      }
    }
  }
  for (int l = 0; l <= n; ++l) {
    for (int k = 0; k <= n; ++k) m(l, k) *= std::sqrt(binomial(n, k) / binomial(n, l));
  }
  return m;
}

Eigen::MatrixXcd spin_rep_algebra(int two_j, const Mat& x) {
  const int n = two_j;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    m(k, k) = double(n - k) * x(0, 0) + double(k) * x(1, 1);
    if (k < n) m(k + 1, k) = double(n - k) * x(1, 0);
    if (k > 0) m(k - 1, k) = double(k) * x(0, 1);
  }
  for (int l = 0; l <= n; ++l) {
    for (int k = 0; k <= n; ++k) m(l, k) *= std::sqrt(binomial(n, k) / binomial(n, l));
  }
  return m;
}

PolarDecomposition polar(const GroupSpec& spec, const ComplexGroupElement& sigma) {
  if (spec.id() == GroupId::U1) {
    const cplx s = sigma.m(0, 0);
    RealCoeffs y(1);
    // sigma = e^{i theta} e^{i (i y)} with basis X = i: exp(iY) = e^{-y}
    y(0) = -std::log(std::abs(s));
    return {{Mat::Constant(1, 1, s / std::abs(s))}, {y}};
  }
  const Mat p = sigma.m.adjoint() * sigma.m;
  const Eigen::Matrix2cd p2 = p;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(p2);
  const Eigen::Vector2d ev = eig.eigenvalues();
  const Eigen::Matrix2cd u = eig.eigenvectors();
  const Eigen::Matrix2cd log_half =
      u * Eigen::Vector2d(0.5 * std::log(ev(0)), 0.5 * std::log(ev(1))).cast<cplx>().asDiagonal() *
      u.adjoint();
  const Eigen::Matrix2cd inv_sqrt =
      u * Eigen::Vector2d(1.0 / std::sqrt(ev(0)), 1.0 / std::sqrt(ev(1))).cast<cplx>().asDiagonal() *
      u.adjoint();
  // iY = log_half, so Y = -i log_half
  const Mat y_mat = Mat(-I * log_half);
  return {{Mat(sigma.m * inv_sqrt)}, {from_matrix(spec, y_mat).real()}};
}

double distance_to_group(const GroupSpec& spec, const Mat& g) {
  const int d = spec.matrix_dim();
  double dist = (g.adjoint() * g - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (spec.id() == GroupId::SU2) {
    dist = std::max(dist, std::abs(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) - 1.0));
  }
  return dist;
}

}  // namespace ymc
