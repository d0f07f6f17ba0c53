#include "sel/params.hpp"

#include <string>

#include "sel/errors.hpp"

namespace sel {

ModelParams make_params(double gamma, double alpha, double epsilon, double A0,
                        double M1, double M2) {
  if (!(gamma > 1.0))
    throw ParameterError("gamma must exceed 1, got " + std::to_string(gamma));
  if (!(alpha > 0.0))
    throw ParameterError("alpha must be positive, got " + std::to_string(alpha));
  if (!(epsilon >= 0.0))
    throw ParameterError("epsilon must be nonnegative");
  if (!(A0 >= 0.0)) throw ParameterError("A0 must be nonnegative");
  if (!(M1 > 0.0) || !(M2 > 0.0))
    throw ParameterError("M1 and M2 must be positive");

  ModelParams p;
  p.gamma_ = gamma;
  p.theta_ = 0.5 * (gamma - 1.0);
  p.kappa_ = p.theta_ * p.theta_ / gamma;
  p.alpha_ = alpha;
  p.epsilon_ = epsilon;
  p.A0_ = A0;
  p.M1_ = M1;
  p.M2_ = M2;
  return p;
}

ModelParams ModelParams::with_rho_floor(double floor) const {
  if (!(floor > 0.0)) throw ParameterError("rho_floor must be positive");
  ModelParams p = *this;
  p.rho_floor_ = floor;
  return p;
}

ModelParams ModelParams::with_epsilon(double epsilon) const {
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be nonnegative");
  ModelParams p = *this;
  p.epsilon_ = epsilon;
  return p;
}

double pressure(double rho, const ModelParams& params) {
  if (rho < 0.0) throw DomainError("pressure: negative density");
  return pressure_unchecked(rho, params);
}

}  // namespace sel
