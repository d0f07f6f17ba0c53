#pragma once

#include <Eigen/Core>
#include <cmath>

namespace sel {

namespace detail {

// x^e with the exponents that show up for gamma in {2, 3} special-cased;
// the solvers call this once or twice per cell per substep.
inline double power(double x, double e) {
  if (e == 0.5) return std::sqrt(x);
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 3.0) return x * x * x;
  if (e == 0.0) return 1.0;
  return std::pow(x, e);
}

}  // namespace detail

/// Physical and scheme constants of the damped isentropic system.
///
/// theta = (gamma - 1) / 2 and kappa = theta^2 / gamma are derived from
/// gamma and cannot be set independently. Construct through make_params().
class ModelParams {
 public:
  double gamma() const { return gamma_; }
  double theta() const { return theta_; }
  double kappa() const { return kappa_; }
  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }
  double A0() const { return A0_; }
  double M1() const { return M1_; }
  double M2() const { return M2_; }

  /// Floor applied only where rho appears in a denominator.
  double rho_floor() const { return rho_floor_; }
  ModelParams with_rho_floor(double floor) const;
  ModelParams with_epsilon(double epsilon) const;

  double rho_pow_theta(double rho) const { return detail::power(rho, theta_); }
  double rho_pow_gamma(double rho) const { return detail::power(rho, gamma_); }

 private:
  friend ModelParams make_params(double, double, double, double, double, double);
  ModelParams() = default;

  double gamma_ = 2.0;
  double theta_ = 0.5;
  double kappa_ = 0.125;
  double alpha_ = 1.0;
  double epsilon_ = 0.0;
  double A0_ = 0.0;
  double M1_ = 1.0;
  double M2_ = 1.0;
  double rho_floor_ = 1e-10;
};

/// Throws ParameterError on gamma <= 1, alpha <= 0, epsilon < 0, A0 < 0,
/// M1 <= 0 or M2 <= 0.
ModelParams make_params(double gamma, double alpha, double epsilon,
                        double A0 = 0.0, double M1 = 1.0, double M2 = 1.0);

/// p(rho) = kappa rho^gamma. Throws DomainError on rho < 0.
double pressure(double rho, const ModelParams& params);

inline double pressure_unchecked(double rho, const ModelParams& params) {
  return params.kappa() * params.rho_pow_gamma(rho);
}

/// p'(rho) = kappa gamma rho^(gamma - 1).
inline double pressure_prime(double rho, const ModelParams& params) {
  return params.kappa() * params.gamma() *
         detail::power(rho, params.gamma() - 1.0);
}

/// c = sqrt(p'(rho)) = sqrt(kappa gamma) rho^theta.
inline double sound_speed(double rho, const ModelParams& params) {
  return std::sqrt(params.kappa() * params.gamma()) * params.rho_pow_theta(rho);
}

template <typename Derived>
auto pressure(const Eigen::ArrayBase<Derived>& rho, const ModelParams& params) {
  return params.kappa() * rho.pow(params.gamma());
}

}  // namespace sel
