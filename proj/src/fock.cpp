#include "ymc/fock.hpp"

#include <Eigen/Eigenvalues>

#include "ymc/gauge.hpp"

namespace ymc {

cplx field_inner(const LatticeField& w, const LatticeField& z) {
  require_same_shape(w, z);
  return w.dt() * (w.data().conjugate().cwiseProduct(z.data())).sum();
}

cplx field_bilinear(const LatticeField& w, const LatticeField& z) {
  require_same_shape(w, z);
  return w.dt() * (w.data().cwiseProduct(z.data())).sum();
}

double field_norm2(const LatticeField& z) { return z.dt() * z.data().squaredNorm(); }

cplx exp_overlap(const LatticeField& w, const LatticeField& z) { return std::exp(field_inner(w, z)); }

CoherentCombo& CoherentCombo::add(cplx coeff, LatticeField label) {
  terms.push_back({coeff, std::move(label)});
  return *this;
}

CoherentCombo CoherentCombo::operator+(const CoherentCombo& o) const {
  CoherentCombo out = *this;
  out.terms.insert(out.terms.end(), o.terms.begin(), o.terms.end());
  return out;
}

CoherentCombo CoherentCombo::operator*(cplx s) const {
  CoherentCombo out = *this;
  for (auto& t : out.terms) t.coeff *= s;
  return out;
}

CoherentCombo normalized_coherent(const LatticeField& z, double hbar) {
  if (!(hbar > 0)) throw std::invalid_argument("hbar must be positive");
  CoherentCombo c;
  c.add(std::exp(-0.5 * field_norm2(z) / hbar), z * cplx(1.0 / std::sqrt(hbar)));
  return c;
}

cplx combo_inner(const CoherentCombo& a, const CoherentCombo& b) {
  cplx s = 0.0;
  for (const auto& x : a.terms)
    for (const auto& y : b.terms) s += std::conj(x.coeff) * y.coeff * exp_overlap(x.label, y.label);
  return s;
}

Eigen::MatrixXcd gram_matrix(const std::vector<LatticeField>& labels) {
  const int k = static_cast<int>(labels.size());
  Eigen::MatrixXcd g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      g(i, j) = exp_overlap(labels[i], labels[j]);
      g(j, i) = std::conj(g(i, j));
    }
  return g;
}

double scaled_gram_min_eigenvalue(const std::vector<LatticeField>& labels) {
  Eigen::MatrixXcd g = gram_matrix(labels);
  const Eigen::VectorXd d = g.diagonal().real().cwiseSqrt().cwiseInverse();
  g = d.asDiagonal() * g * d.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

cplx ggv_coefficient(const SmoothLoop& chi, const LatticeField& z) {
  cplx pair = 0.0;
  for (int n = 0; n < z.steps(); ++n) {
    const AlgebraVector d = chi.log_derivative(z.time(n));
    pair += d.c.cast<cplx>().dot(z.slice(n).c);
  }
  return std::exp(-0.5 * chi.energy() + z.dt() * pair);
}

CoherentCombo ggv_apply(const SmoothLoop& chi, const CoherentCombo& c) {
  CoherentCombo out;
  out.terms.reserve(c.terms.size());
  for (const auto& t : c.terms) out.add(t.coeff * ggv_coefficient(chi, t.label), gauge_transform(t.label, chi));
  return out;
}

}  // namespace ymc
