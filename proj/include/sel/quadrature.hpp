#pragma once

#include <Eigen/Core>

namespace sel {

/// Nodes and weights on [-1, 1]; weights already carry the weight function.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return nodes.size(); }
};

/// Gauss rule for the weight (1 - z^2)^lambda (Gauss-Gegenbauer), built by
/// the Golub-Welsch eigenvalue method. Exact for polynomials of degree
/// 2n - 1 times the weight. Requires lambda > -1/2.
QuadratureRule gauss_gegenbauer(int n, double lambda);

/// lambda = 0 special case.
inline QuadratureRule gauss_legendre(int n) { return gauss_gegenbauer(n, 0.0); }

/// Integral of (1 - z^2)^lambda over [-1, 1].
double gegenbauer_weight_mass(double lambda);

}  // namespace sel
