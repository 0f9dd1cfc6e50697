#include "ymc/compact.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

namespace ymc {

namespace {

Mat basis_matrix(const GroupSpec& spec, int a) {
  ComplexCoeffs c = ComplexCoeffs::Zero(spec.algebra_dim());
  c(a) = 1.0;
  return to_matrix(spec, c);
}

Eigen::MatrixXcd haar_average(const Representation& rep, int polar, int angle) {
  const QuadratureRule rule = haar_rule(rep.spec, polar, angle);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
  for (std::size_t i = 0; i < rule.points.size(); ++i) s += rule.weights[i] * rep.matrix(rule.points[i]);
  return s;
}

}  // namespace

Representation trivial_representation(const GroupSpec& spec) {
  std::vector<Eigen::MatrixXcd> gens(spec.algebra_dim(), Eigen::MatrixXcd::Zero(1, 1));
  return {spec, 1, [](const GroupElement&) { return Eigen::MatrixXcd::Identity(1, 1); }, gens};
}

Representation defining_representation(const GroupSpec& spec) {
  const int n = spec.id() == GroupId::U1 ? 1 : 2;
  std::vector<Eigen::MatrixXcd> gens;
  for (int a = 0; a < spec.algebra_dim(); ++a) gens.push_back(basis_matrix(spec, a));
  return {spec, n, [](const GroupElement& g) { return Eigen::MatrixXcd(g.m); }, gens};
}

Representation spin_representation(int two_j) {
  const GroupSpec su2 = GroupSpec::su2();
  std::vector<Eigen::MatrixXcd> gens;
  for (int a = 0; a < 3; ++a) gens.push_back(spin_rep_algebra(two_j, basis_matrix(su2, a)));
  return {su2, two_j + 1, [two_j](const GroupElement& g) { return spin_rep(two_j, g.m); }, gens};
}

Representation tensor(const Representation& a, const Representation& b) {
  if (a.spec.id() != b.spec.id()) throw std::invalid_argument("tensor product of representations of different groups");
  std::vector<Eigen::MatrixXcd> gens;
  const Eigen::MatrixXcd ia = Eigen::MatrixXcd::Identity(a.dim, a.dim), ib = Eigen::MatrixXcd::Identity(b.dim, b.dim);
  for (std::size_t k = 0; k < a.generators.size(); ++k)
    gens.push_back(Eigen::kroneckerProduct(a.generators[k], ib).eval() +
                   Eigen::kroneckerProduct(ia, b.generators[k]).eval());
  auto fa = a.matrix, fb = b.matrix;
  return {a.spec, a.dim * b.dim,
          [fa, fb](const GroupElement& g) { return Eigen::MatrixXcd(Eigen::kroneckerProduct(fa(g), fb(g))); },
          gens};
}

Eigen::MatrixXcd invariant_projector(const Representation& rep) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
  for (const auto& x : rep.generators) c -= x * x;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(c);
  const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
  for (int i = 0; i < rep.dim; ++i)
    if (std::abs(eig.eigenvalues()(i)) < 1e-9 * scale)
      p += eig.eigenvectors().col(i) * eig.eigenvectors().col(i).adjoint();
  return p;
}

OracleReport compact_oracle(const Representation& rep, const QuadratureBudget& budget) {
  OracleReport r;
  r.haar_average = haar_average(rep, budget.polar_nodes, budget.angle_nodes);
  const Eigen::MatrixXcd coarse =
      haar_average(rep, std::max(2, 3 * budget.polar_nodes / 4), std::max(2, 3 * budget.angle_nodes / 4));
  r.quadrature_error = (r.haar_average - coarse).cwiseAbs().maxCoeff();
  if (r.quadrature_error > budget.tolerance) {
    std::ostringstream msg;
    msg << "Haar quadrature for a " << rep.dim << "-dimensional representation changed by " << r.quadrature_error
        << " between rules; raise the node counts";
    throw BudgetError(msg.str());
  }
  r.projector = invariant_projector(rep);
  r.rank = static_cast<int>(std::lround(r.projector.trace().real()));
  r.deviation = (r.haar_average - r.projector).cwiseAbs().maxCoeff();
  return r;
}

cplx reduced_rep_inner(const OracleReport& r, const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi) {
  return psi.dot(r.haar_average * phi);
}

}  // namespace ymc
