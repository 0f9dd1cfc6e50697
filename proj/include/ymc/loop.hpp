#pragma once

// Smooth based loops chi: [0,1] -> K with closed-form logarithmic derivative.

#include <vector>

#include "ymc/group.hpp"

namespace ymc {

// chi(t) = exp(f_1(t) Y_1) exp(f_2(t) Y_2) ... with
// f_i(t) = sum_k a_k sin(2 pi k t) + b_k (1 - cos(2 pi k t)), so chi(0) = chi(1) = e.
class SmoothLoop {
 public:
  struct Factor {
    AlgebraVector direction;
    std::vector<double> sin_coeffs;  // a_k, k = 1, 2, ...
    std::vector<double> cos_coeffs;  // b_k
  };

  explicit SmoothLoop(GroupSpec spec, std::vector<Factor> factors = {});

  // A loop with `factors` factors of up to `modes` Fourier modes, random
  // unit directions and coefficients of size `scale`.
  static SmoothLoop random(const GroupSpec& spec, Rng& rng, int factors, int modes, double scale);

  const GroupSpec& spec() const { return spec_; }
  const std::vector<Factor>& factors() const { return factors_; }

  GroupElement value(double t) const;
  // chi(t)^{-1} d chi / dt.
  AlgebraVector log_derivative(double t) const;
  // int_0^1 |log_derivative|^2 dt by the periodic trapezoid rule (spectrally accurate).
  double energy(int nodes = 1024) const;

  // Pointwise product (this * other)(t) = this(t) other(t).
  SmoothLoop operator*(const SmoothLoop& other) const;
  SmoothLoop inverse() const;

 private:
  GroupSpec spec_;
  std::vector<Factor> factors_;
};

}  // namespace ymc
