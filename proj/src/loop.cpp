#include "ymc/loop.hpp"

#include <cmath>

namespace ymc {

namespace {

double profile(const SmoothLoop::Factor& f, double t) {
  t -= std::floor(t);  // exact identity at integer times
  double v = 0.0;
  for (std::size_t k = 0; k < f.sin_coeffs.size(); ++k)
    v += f.sin_coeffs[k] * std::sin(2.0 * M_PI * (k + 1) * t);
  for (std::size_t k = 0; k < f.cos_coeffs.size(); ++k)
    v += f.cos_coeffs[k] * (1.0 - std::cos(2.0 * M_PI * (k + 1) * t));
  return v;
}

double profile_derivative(const SmoothLoop::Factor& f, double t) {
  double v = 0.0;
  for (std::size_t k = 0; k < f.sin_coeffs.size(); ++k) {
    const double w = 2.0 * M_PI * (k + 1);
    v += f.sin_coeffs[k] * w * std::cos(w * t);
  }
  for (std::size_t k = 0; k < f.cos_coeffs.size(); ++k) {
    const double w = 2.0 * M_PI * (k + 1);
    v += f.cos_coeffs[k] * w * std::sin(w * t);
  }
  return v;
}

}  // namespace

SmoothLoop::SmoothLoop(GroupSpec spec, std::vector<Factor> factors)
    : spec_(spec), factors_(std::move(factors)) {
  for (const auto& f : factors_) {
    if (f.direction.c.size() != spec_.algebra_dim())
      throw std::invalid_argument("loop factor direction has the wrong dimension");
  }
}

SmoothLoop SmoothLoop::random(const GroupSpec& spec, Rng& rng, int factors, int modes, double scale) {
  std::normal_distribution<double> normal;
  std::vector<Factor> fs;
  for (int i = 0; i < factors; ++i) {
    RealCoeffs d(spec.algebra_dim());
    for (int a = 0; a < spec.algebra_dim(); ++a) d(a) = normal(rng);
    d /= d.norm();
    Factor f{{d}, {}, {}};
    for (int k = 0; k < modes; ++k) {
      f.sin_coeffs.push_back(scale * normal(rng) / (k + 1));
      f.cos_coeffs.push_back(scale * normal(rng) / (k + 1));
    }
    fs.push_back(std::move(f));
  }
  return SmoothLoop(spec, std::move(fs));
}

GroupElement SmoothLoop::value(double t) const {
  GroupElement g = GroupElement::identity(spec_);
  for (const auto& f : factors_) g = g * exp_map(spec_, f.direction * profile(f, t));
  return g;
}

AlgebraVector SmoothLoop::log_derivative(double t) const {
  // (AB)^{-1}(AB)' = Ad(B^{-1}) A^{-1}A' + B^{-1}B'; sweep from the right.
  AlgebraVector result = AlgebraVector::zero(spec_);
  GroupElement right = GroupElement::identity(spec_);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    const AlgebraVector local = it->direction * profile_derivative(*it, t);
    result = result + adjoint(spec_, right.inverse(), local);
    right = exp_map(spec_, it->direction * profile(*it, t)) * right;
  }
  return result;
}

double SmoothLoop::energy(int nodes) const {
  double s = 0.0;
  for (int i = 0; i < nodes; ++i) s += log_derivative(double(i) / nodes).c.squaredNorm();
  return s / nodes;
}

SmoothLoop SmoothLoop::operator*(const SmoothLoop& other) const {
  if (!(spec_ == other.spec_)) throw std::invalid_argument("loops over different groups");
  std::vector<Factor> fs = factors_;
  fs.insert(fs.end(), other.factors_.begin(), other.factors_.end());
  return SmoothLoop(spec_, std::move(fs));
}

SmoothLoop SmoothLoop::inverse() const {
  std::vector<Factor> fs(factors_.rbegin(), factors_.rend());
  for (auto& f : fs) f.direction = -f.direction;
  return SmoothLoop(spec_, std::move(fs));
}

}  // namespace ymc
