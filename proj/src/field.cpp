#include "ymc/field.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace ymc {

LatticeField::LatticeField(GroupSpec spec, int steps, double offset)
    : spec_(spec), offset_(offset), data_(Eigen::MatrixXcd::Zero(steps, spec.algebra_dim())) {
  if (steps < 1) throw std::invalid_argument("lattice field needs at least one slice");
}

LatticeField LatticeField::sample(const GroupSpec& spec, int steps,
                                  const std::function<ComplexAlgebraVector(double)>& fn,
                                  double offset) {
  LatticeField f(spec, steps, offset);
  for (int n = 0; n < steps; ++n) f.set_slice(n, fn(f.time(n)));
  return f;
}

LatticeField LatticeField::from_parts(const LatticeField& a, const LatticeField& e) {
  require_same_shape(a, e);
  LatticeField z(a.spec(), a.steps(), a.offset());
  z.data_ = a.data_.real().cast<cplx>() + cplx(0.0, 0.5) * e.data_.real().cast<cplx>();
  return z;
}

void require_same_shape(const LatticeField& a, const LatticeField& b) {
  if (!(a.spec() == b.spec()) || a.steps() != b.steps() || a.offset() != b.offset()) {
    std::ostringstream msg;
    msg << "lattice fields differ in shape: " << a.spec().name() << "/" << a.steps() << "/"
        << a.offset() << " vs " << b.spec().name() << "/" << b.steps() << "/" << b.offset();
    throw std::invalid_argument(msg.str());
  }
}

LatticeField LatticeField::operator+(const LatticeField& o) const {
  require_same_shape(*this, o);
  LatticeField r = *this;
  r.data_ += o.data_;
  return r;
}

LatticeField LatticeField::operator-(const LatticeField& o) const {
  require_same_shape(*this, o);
  LatticeField r = *this;
  r.data_ -= o.data_;
  return r;
}

LatticeField LatticeField::operator*(cplx s) const {
  LatticeField r = *this;
  r.data_ *= s;
  return r;
}

LatticeField LatticeField::conj() const {
  LatticeField r = *this;
  r.data_ = r.data_.conjugate();
  return r;
}

void write_fields(std::ostream& out, const std::vector<LatticeField>& fields) {
  out << "# ymc-fields 1\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const LatticeField& f = fields[k];
    out << "# field " << k << " group " << f.spec().name() << " steps " << f.steps() << " offset "
        << f.offset() << "\n";
    for (int n = 0; n < f.steps(); ++n)
      for (int a = 0; a < f.spec().algebra_dim(); ++a)
        out << n << " " << a << " " << f.data()(n, a).real() << " " << f.data()(n, a).imag() << "\n";
  }
}

std::vector<LatticeField> read_fields(std::istream& in) {
  std::vector<LatticeField> fields;
  std::string line;
  int lineno = 0;
  const auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << "field file line " << lineno << ": " << what;
    throw std::runtime_error(msg.str());
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    if (line[0] == '#') {
      std::string hash, word;
      ss >> hash >> word;
      if (word != "field") continue;
      std::string idx, kg, group, ks, ko;
      int steps = 0;
      double offset = 0.0;
      ss >> idx >> kg >> group >> ks >> steps >> ko >> offset;
      if (!ss || kg != "group" || ks != "steps" || ko != "offset") fail("malformed field header");
      fields.emplace_back(GroupSpec::from_name(group), steps, offset);
      continue;
    }
    if (fields.empty()) fail("data row before any field header");
    int n = -1, a = -1;
    double re = 0.0, im = 0.0;
    ss >> n >> a >> re >> im;
    if (!ss) fail("expected '<slice> <component> <re> <im>'");
    LatticeField& f = fields.back();
    if (n < 0 || n >= f.steps() || a < 0 || a >= f.spec().algebra_dim()) fail("index out of range");
    f.data()(n, a) = cplx(re, im);
  }
  return fields;
}

}  // namespace ymc
