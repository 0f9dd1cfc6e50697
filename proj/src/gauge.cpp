#include "ymc/gauge.hpp"

#include <stdexcept>

namespace ymc {

double LinkConfiguration::max_distance_to_group() const {
  double d = 0.0;
  for (const auto& u : links) d = std::max(d, distance_to_group(spec, u.m));
  return d;
}

namespace {

void check_real(const LatticeField& a) {
  if (!a.is_real()) throw std::invalid_argument("wilson: field has a nonzero E part; use wilson_c");
}

void check_index(const LatticeField& z, int m) {
  if (m < 0 || m > z.steps()) throw std::out_of_range("incomplete Wilson loop index out of range");
}

}  // namespace

ComplexGroupElement incomplete_wilson_c(const LatticeField& z, int m) {
  check_index(z, m);
  const GroupSpec& spec = z.spec();
  ComplexGroupElement w = ComplexGroupElement::identity(spec);
  for (int n = 0; n < m; ++n) w = exp_map(spec, z.slice(n) * cplx(-z.dt())) * w;
  return w;
}

GroupElement incomplete_wilson(const LatticeField& a, int m) {
  check_real(a);
  check_index(a, m);
  const GroupSpec& spec = a.spec();
  GroupElement w = GroupElement::identity(spec);
  for (int n = 0; n < m; ++n) w = exp_map(spec, a.a_part(n) * -a.dt()) * w;
  return w;
}

GroupElement wilson(const LatticeField& a) { return incomplete_wilson(a, a.steps()); }
ComplexGroupElement wilson_c(const LatticeField& z) { return incomplete_wilson_c(z, z.steps()); }

LinkConfiguration links_from_field(const LatticeField& z) {
  LinkConfiguration u{z.spec(), {}};
  u.links.reserve(z.steps());
  for (int n = 0; n < z.steps(); ++n) u.links.push_back(exp_map(z.spec(), z.slice(n) * cplx(-z.dt())));
  return u;
}

ComplexGroupElement holonomy(const LinkConfiguration& u) {
  ComplexGroupElement w = ComplexGroupElement::identity(u.spec);
  for (const auto& link : u.links) w = link * w;
  return w;
}

LatticeField gauge_transform(const LatticeField& z, const SmoothLoop& chi) {
  if (chi.factors().empty()) return z;
  LatticeField out(z.spec(), z.steps(), z.offset());
  for (int n = 0; n < z.steps(); ++n) {
    const double t = z.time(n);
    const AlgebraVector d = chi.log_derivative(t);
    ComplexAlgebraVector shifted = z.slice(n);
    shifted.c -= d.c.cast<cplx>();
    out.set_slice(n, adjoint(z.spec(), chi.value(t), shifted));
  }
  return out;
}

LinkConfiguration gauge_transform_links(const LinkConfiguration& u, const std::vector<GroupElement>& sites) {
  if (static_cast<int>(sites.size()) != u.size() + 1)
    throw std::invalid_argument("gauge_transform_links needs N + 1 site values");
  LinkConfiguration out{u.spec, {}};
  out.links.reserve(u.size());
  for (int n = 0; n < u.size(); ++n) {
    const ComplexGroupElement left{sites[n + 1].m}, right{sites[n].m.adjoint()};
    out.links.push_back(left * u.links[n] * right);
  }
  return out;
}

std::vector<GroupElement> site_values(const SmoothLoop& chi, int steps) {
  std::vector<GroupElement> sites;
  sites.reserve(steps + 1);
  for (int n = 0; n <= steps; ++n) sites.push_back(chi.value(double(n) / steps));
  return sites;
}

std::vector<AlgebraVector> gauss_law(const LatticeField& z) {
  const int steps = z.steps();
  std::vector<AlgebraVector> c;
  c.reserve(steps);
  for (int n = 0; n < steps; ++n) {
    const AlgebraVector ep = z.e_part((n + 1) % steps), em = z.e_part((n + steps - 1) % steps);
    AlgebraVector v{(ep.c - em.c) * (0.5 * steps)};
    const ComplexAlgebraVector a{z.a_part(n).c.cast<cplx>()}, e{z.e_part(n).c.cast<cplx>()};
    v.c += bracket(z.spec(), a, e).c.real();
    c.push_back(v);
  }
  return c;
}

}  // namespace ymc
