#pragma once

// Matrix Lie group kernel for K in {U(1), SU(2)} and their complexifications
// K_C in {C*, SL(2,C)}.
//
// Conventions:
//   * SU(2) algebra basis X_a = -(i/2) sigma_a, inner product <X,Y> = -2 tr(XY).
//   * U(1) algebra basis X = i, inner product <X,Y> = -XY.
//   * Complex algebra vectors pair sesquilinearly, antilinear in the first slot.
//   * Representation labels are integers: twice the spin (n = 2j) for SU(2),
//     the charge m for U(1).

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace ymc {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

// Dense matrices of size at most 2x2; no heap allocation.
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;
using RealCoeffs = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using ComplexCoeffs = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, 3, 1>;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GroupId { U1, SU2 };

class GroupSpec {
 public:
  static GroupSpec u1() { return GroupSpec(GroupId::U1); }
  static GroupSpec su2() { return GroupSpec(GroupId::SU2); }
  static GroupSpec from_name(std::string_view name);

  GroupId id() const { return id_; }
  std::string_view name() const { return id_ == GroupId::U1 ? "u1" : "su2"; }
  int matrix_dim() const { return id_ == GroupId::U1 ? 1 : 2; }
  int algebra_dim() const { return id_ == GroupId::U1 ? 1 : 3; }
  // kappa in <X,Y> = -kappa tr(XY); makes the basis orthonormal.
  double trace_scale() const { return id_ == GroupId::U1 ? 1.0 : 2.0; }
  const Mat& basis(int a) const;

  bool operator==(const GroupSpec&) const = default;

 private:
  explicit GroupSpec(GroupId id) : id_(id) {}
  GroupId id_;
};

struct AlgebraVector {
  RealCoeffs c;

  static AlgebraVector zero(const GroupSpec& spec) {
    return {RealCoeffs::Zero(spec.algebra_dim())};
  }
  AlgebraVector operator+(const AlgebraVector& o) const { return {c + o.c}; }
  AlgebraVector operator-(const AlgebraVector& o) const { return {c - o.c}; }
  AlgebraVector operator-() const { return {-c}; }
  AlgebraVector operator*(double s) const { return {c * s}; }
};

struct ComplexAlgebraVector {
  ComplexCoeffs c;

  static ComplexAlgebraVector zero(const GroupSpec& spec) {
    return {ComplexCoeffs::Zero(spec.algebra_dim())};
  }
  ComplexAlgebraVector() = default;
  ComplexAlgebraVector(ComplexCoeffs coeffs) : c(std::move(coeffs)) {}
  ComplexAlgebraVector(const AlgebraVector& x) : c(x.c.cast<cplx>()) {}

  ComplexAlgebraVector operator+(const ComplexAlgebraVector& o) const { return {c + o.c}; }
  ComplexAlgebraVector operator-(const ComplexAlgebraVector& o) const { return {c - o.c}; }
  ComplexAlgebraVector operator-() const { return {-c}; }
  ComplexAlgebraVector operator*(cplx s) const { return {c * s}; }
  AlgebraVector real() const { return {c.real()}; }
  AlgebraVector imag() const { return {c.imag()}; }
};

// Point of K: unitary, determinant one for SU(2).
struct GroupElement {
  Mat m;

  static GroupElement identity(const GroupSpec& spec) {
    return {Mat::Identity(spec.matrix_dim(), spec.matrix_dim())};
  }
  GroupElement operator*(const GroupElement& o) const { return {m * o.m}; }
  GroupElement inverse() const { return {m.adjoint()}; }
};

// Point of K_C: invertible, determinant one for SL(2,C).
struct ComplexGroupElement {
  Mat m;

  static ComplexGroupElement identity(const GroupSpec& spec) {
    return {Mat::Identity(spec.matrix_dim(), spec.matrix_dim())};
  }
  ComplexGroupElement() = default;
  ComplexGroupElement(Mat mat) : m(std::move(mat)) {}
  ComplexGroupElement(const GroupElement& g) : m(g.m) {}

  ComplexGroupElement operator*(const ComplexGroupElement& o) const { return {m * o.m}; }
  ComplexGroupElement inverse() const;
  ComplexGroupElement dagger() const { return {m.adjoint()}; }
};

// Matrix form sum_a c_a X_a and its inverse.
Mat to_matrix(const GroupSpec& spec, const ComplexCoeffs& c);
ComplexCoeffs from_matrix(const GroupSpec& spec, const Mat& x);

GroupElement exp_map(const GroupSpec& spec, const AlgebraVector& x);
ComplexGroupElement exp_map(const GroupSpec& spec, const ComplexAlgebraVector& x);
// Matrix exponential of an element of the (complexified) algebra in matrix form.
Mat exp_matrix(const GroupSpec& spec, const Mat& x);

// Principal logarithm; undefined at -1 (rotation angle pi).
AlgebraVector log_map(const GroupSpec& spec, const GroupElement& g);

ComplexAlgebraVector adjoint(const GroupSpec& spec, const GroupElement& g,
                             const ComplexAlgebraVector& x);
AlgebraVector adjoint(const GroupSpec& spec, const GroupElement& g, const AlgebraVector& x);

// Sesquilinear, antilinear in the first argument.
cplx inner(const ComplexAlgebraVector& x, const ComplexAlgebraVector& y);
// Complex bilinear extension of the real inner product.
cplx bilinear(const ComplexAlgebraVector& x, const ComplexAlgebraVector& y);

ComplexAlgebraVector bracket(const GroupSpec& spec, const ComplexAlgebraVector& x,
                             const ComplexAlgebraVector& y);

int rep_dimension(const GroupSpec& spec, int label);
double casimir(const GroupSpec& spec, int label);
cplx character(const GroupSpec& spec, int label, const ComplexGroupElement& sigma);

// |Im z| where e^{+-iz} are the eigenvalues (SU(2)) or sigma = e^{iz} (U(1)).
double imaginary_extent(const GroupSpec& spec, const Mat& sigma);

// Iterates characters of increasing label without divisions.
//   SU(2): chi_{n/2}(sigma) for n = 0, 1, 2, ... (Chebyshev recurrence in tr/2).
//   U(1):  the pair (chi_m, chi_{-m}) for m = 0, 1, 2, ...
class CharacterSequence {
 public:
  CharacterSequence(const GroupSpec& spec, const Mat& sigma);
  // Returns the value(s) at the current label and advances. For U(1) the
  // second component is chi_{-m}; for SU(2) it is zero.
  std::pair<cplx, cplx> next();

 private:
  GroupId id_;
  cplx w_{};           // SU(2): tr(sigma)/2
  cplx prev_{}, cur_{};
  cplx s_{}, s_inv_{};  // U(1): sigma, sigma^{-1}
  cplx pos_{1.0}, neg_{1.0};
  int label_ = 0;
};

GroupElement haar_sample(const GroupSpec& spec, Rng& rng);

// Spin-(n/2) representation of SL(2,C) on homogeneous polynomials of degree n,
// in the orthonormal monomial basis; unitary on SU(2).
Eigen::MatrixXcd spin_rep(int two_j, const Mat& g);
// Derived representation of an algebra element given in matrix form.
Eigen::MatrixXcd spin_rep_algebra(int two_j, const Mat& x);

// Polar decomposition sigma = k exp(iY) with k in K and Y in the real algebra.
struct PolarDecomposition {
  GroupElement k;
  AlgebraVector y;
};
PolarDecomposition polar(const GroupSpec& spec, const ComplexGroupElement& sigma);

double distance_to_group(const GroupSpec& spec, const Mat& g);

}  // namespace ymc
