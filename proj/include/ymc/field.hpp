#pragma once

// Complexified fields Z = A + (i/2) E on the circle, sampled on N time slices.

#include <functional>
#include <iosfwd>
#include <vector>

#include "ymc/group.hpp"

namespace ymc {

class LatticeField {
 public:
  // Slice n sits at time (n + offset) / N; offset is 0 (left points) or 0.5 (midpoints).
  LatticeField(GroupSpec spec, int steps, double offset = 0.0);

  static LatticeField sample(const GroupSpec& spec, int steps,
                             const std::function<ComplexAlgebraVector(double)>& fn,
                             double offset = 0.0);
  // Z = A + (i/2) E slice by slice.
  static LatticeField from_parts(const LatticeField& a, const LatticeField& e);

  const GroupSpec& spec() const { return spec_; }
  int steps() const { return static_cast<int>(data_.rows()); }
  double dt() const { return 1.0 / steps(); }
  double offset() const { return offset_; }
  double time(int n) const { return (n + offset_) / steps(); }

  ComplexAlgebraVector slice(int n) const { return {ComplexCoeffs(data_.row(n).transpose())}; }
  void set_slice(int n, const ComplexAlgebraVector& z) { data_.row(n) = z.c.transpose(); }
  AlgebraVector a_part(int n) const { return {RealCoeffs(data_.row(n).real().transpose())}; }
  AlgebraVector e_part(int n) const { return {RealCoeffs(2.0 * data_.row(n).imag().transpose())}; }

  const Eigen::MatrixXcd& data() const { return data_; }
  Eigen::MatrixXcd& data() { return data_; }

  bool is_real(double tol = 0.0) const { return data_.imag().cwiseAbs().maxCoeff() <= tol; }

  LatticeField operator+(const LatticeField& o) const;
  LatticeField operator-(const LatticeField& o) const;
  LatticeField operator*(cplx s) const;
  LatticeField conj() const;

 private:
  GroupSpec spec_;
  double offset_;
  Eigen::MatrixXcd data_;  // steps x algebra_dim
};

void require_same_shape(const LatticeField& a, const LatticeField& b);

// Columnar text format, one record per line:
//   # ymc-fields 1
//   # field <index> group <u1|su2> steps <N> offset <0|0.5>
//   <slice> <component> <re> <im>
void write_fields(std::ostream& out, const std::vector<LatticeField>& fields);
std::vector<LatticeField> read_fields(std::istream& in);

}  // namespace ymc
