#pragma once

// Finite-dimensional unitary representations of K and the projection onto
// invariant vectors, computed two ways: Haar averaging by quadrature and the
// kernel of the Casimir.

#include <functional>
#include <vector>

#include "ymc/heat.hpp"

namespace ymc {

struct Representation {
  GroupSpec spec;
  int dim;
  std::function<Eigen::MatrixXcd(const GroupElement&)> matrix;
  std::vector<Eigen::MatrixXcd> generators;  // d pi(X_a)
};

Representation trivial_representation(const GroupSpec& spec);
Representation defining_representation(const GroupSpec& spec);
Representation spin_representation(int two_j);
Representation tensor(const Representation& a, const Representation& b);

// Projector onto the kernel of -sum_a d pi(X_a)^2.
Eigen::MatrixXcd invariant_projector(const Representation& rep);

struct OracleReport {
  Eigen::MatrixXcd haar_average;  // int U(g) dg
  Eigen::MatrixXcd projector;
  int rank;
  double deviation;         // max entry of |haar_average - projector|
  double quadrature_error;  // against a rule with three quarters of the nodes
};

// Throws BudgetError if the quadrature error estimate exceeds budget.tolerance.
OracleReport compact_oracle(const Representation& rep, const QuadratureBudget& budget = {8, 16, 1e-10});

// (psi, phi)_0 = int (psi, U(g) phi) dg using the Haar average from a report.
cplx reduced_rep_inner(const OracleReport& r, const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi);

}  // namespace ymc
