#pragma once

// Coherent-state algebra on the Fock space over the lattice field space.
// States are finite combinations of exponential vectors |Z>; every inner
// product reduces to (|W>, |Z>) = e^{(W, Z)}.

#include <vector>

#include "ymc/field.hpp"
#include "ymc/loop.hpp"

namespace ymc {

// (W, Z) = dt sum_n inner(W_n, Z_n), antilinear in W.
cplx field_inner(const LatticeField& w, const LatticeField& z);
// Complex bilinear version dt sum_n bilinear(W_n, Z_n).
cplx field_bilinear(const LatticeField& w, const LatticeField& z);
double field_norm2(const LatticeField& z);

cplx exp_overlap(const LatticeField& w, const LatticeField& z);

struct CoherentTerm {
  cplx coeff;
  LatticeField label;
};

struct CoherentCombo {
  std::vector<CoherentTerm> terms;

  CoherentCombo& add(cplx coeff, LatticeField label);
  CoherentCombo operator+(const CoherentCombo& o) const;
  CoherentCombo operator*(cplx s) const;
};

// e^{-(Z, Z) / 2 hbar} |Z / sqrt(hbar)>, a unit vector.
CoherentCombo normalized_coherent(const LatticeField& z, double hbar);

cplx combo_inner(const CoherentCombo& a, const CoherentCombo& b);

Eigen::MatrixXcd gram_matrix(const std::vector<LatticeField>& labels);
// Smallest eigenvalue of the diagonally scaled Gram matrix D^{-1/2} G D^{-1/2}.
double scaled_gram_min_eigenvalue(const std::vector<LatticeField>& labels);

// U(chi)|Z> = e^{-|dchi|^2 / 2 + (dchi, Z)} |Z^chi>, with dchi = chi^{-1} dchi/dt.
// |dchi|^2 is the quadrature energy of chi; (dchi, Z) is the slice sum.
CoherentCombo ggv_apply(const SmoothLoop& chi, const CoherentCombo& c);
// The coefficient multiplying |Z^chi>.
cplx ggv_coefficient(const SmoothLoop& chi, const LatticeField& z);

}  // namespace ymc
