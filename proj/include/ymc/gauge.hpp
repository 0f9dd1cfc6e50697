#pragma once

// Wilson loops, the gauge action on fields and links, and the Gauss-law constraint.
//
// Path ordering puts later times on the left:
//   W(Z) = exp(-dt Z_{N-1}) ... exp(-dt Z_1) exp(-dt Z_0).
// With this ordering the link action U'_n = chi(t_{n+1}) U_n chi(t_n)^{-1} is the
// lattice version of Z -> Ad(chi)(Z - chi^{-1} dchi/dt), and W(Z^chi) = chi(1) W(Z) chi(0)^{-1}.

#include <vector>

#include "ymc/field.hpp"
#include "ymc/loop.hpp"

namespace ymc {

struct LinkConfiguration {
  GroupSpec spec;
  std::vector<ComplexGroupElement> links;  // U_0 .. U_{N-1}, U_n carries slice n

  int size() const { return static_cast<int>(links.size()); }
  // Largest distance of a link from the compact group.
  double max_distance_to_group() const;
};

GroupElement wilson(const LatticeField& a);
ComplexGroupElement wilson_c(const LatticeField& z);
// Product of the first m slices, m = 0..N.
GroupElement incomplete_wilson(const LatticeField& a, int m);
ComplexGroupElement incomplete_wilson_c(const LatticeField& z, int m);

LinkConfiguration links_from_field(const LatticeField& z);
ComplexGroupElement holonomy(const LinkConfiguration& u);

// Z^chi_n = Ad(chi(t_n)) (Z_n - chi^{-1} dchi/dt (t_n)) at the slice times of z.
LatticeField gauge_transform(const LatticeField& z, const SmoothLoop& chi);
// U'_n = g_{n+1} U_n g_n^{-1}; sites holds g_0 .. g_N.
LinkConfiguration gauge_transform_links(const LinkConfiguration& u, const std::vector<GroupElement>& sites);
// chi at the lattice sites t_n = n / N, n = 0..N.
std::vector<GroupElement> site_values(const SmoothLoop& chi, int steps);

// C_n = (E_{n+1} - E_{n-1}) / (2 dt) + [A_n, E_n], periodic in n.
std::vector<AlgebraVector> gauss_law(const LatticeField& z);

}  // namespace ymc
