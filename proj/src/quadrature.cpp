#include "sel/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "sel/errors.hpp"

namespace sel {

double gegenbauer_weight_mass(double lambda) {
  return std::sqrt(std::numbers::pi) *
         std::exp(std::lgamma(lambda + 1.0) - std::lgamma(lambda + 1.5));
}

QuadratureRule gauss_gegenbauer(int n, double lambda) {
  if (n < 1) throw ParameterError("quadrature needs at least one node");
  if (!(lambda > -0.5)) throw ParameterError("Gegenbauer rule needs lambda > -1/2");

  // Jacobi matrix of the monic Gegenbauer recurrence: zero diagonal,
  // off-diagonal sqrt(k (k + 2 lambda) / ((2k + 2 lambda)^2 - 1)).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + 2.0 * lambda;
    sub[k - 1] = std::sqrt(k * (k + 2.0 * lambda) / (s * s - 1.0));
  }

  const double mass = gegenbauer_weight_mass(lambda);
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = Eigen::VectorXd::Zero(1);
    rule.weights = Eigen::VectorXd::Constant(1, mass);
    return rule;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("Golub-Welsch eigen solve failed");

  const Eigen::VectorXd& z = solver.eigenvalues();
  Eigen::VectorXd w = mass * solver.eigenvectors().row(0).transpose().array().square().matrix();

  // The weight is even, so enforce exact node/weight symmetry.
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = n - 1 - i;
    rule.nodes[i] = 0.5 * (z[i] - z[j]);
    rule.weights[i] = 0.5 * (w[i] + w[j]);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace sel
