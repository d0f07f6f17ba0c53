#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

#include "sel/field_state.hpp"
#include "sel/params.hpp"
#include "sel/quadrature.hpp"

namespace sel {

/// Convex generator g of a kinetic entropy pair, with g' and g''.
class Generator {
 public:
  enum class Kind { One, Xi, HalfXiSq, Power, Custom };

  /// "one", "xi", "half_xi_sq" or "power:p" with p >= 2 (g = |xi|^p / p).
  static Generator named(const std::string& name);
  static Generator custom(std::string name, std::function<double(double)> g,
                          std::function<double(double)> dg,
                          std::function<double(double)> d2g);

  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }

  double value(double xi) const;
  double first(double xi) const;
  double second(double xi) const;

 private:
  Generator() = default;

  std::string name_;
  Kind kind_ = Kind::One;
  double p_ = 2.0;
  std::function<double(double)> g_, dg_, d2g_;
};

/// Generator plus the kinetic quadrature data for one gamma.
///
/// lambda = (3 - gamma) / (2 (gamma - 1)) and c_lambda is the reciprocal of
/// the mass of (1 - z^2)^lambda on [-1, 1]. The quadrature is Gauss for that
/// weight, so weights[k] already stands for w_k (1 - z_k^2)^lambda.
struct EntropyPair {
  Generator g;
  double lambda = 0.0;
  double c_lambda = 0.5;
  QuadratureRule rule;
};

inline constexpr int kDefaultQuadNodes = 48;

EntropyPair make_entropy_pair(const Generator& g, const ModelParams& params,
                              int nodes = kDefaultQuadNodes);
EntropyPair make_entropy_pair(const std::string& name, const ModelParams& params,
                              int nodes = kDefaultQuadNodes);

/// eta(rho, m) = c rho sum_k w_k g(u + z_k rho^theta); 0 at rho = 0.
double eval_entropy(double rho, double m, const EntropyPair& pair,
                    const ModelParams& params);

/// H(rho, m) = c rho sum_k w_k g(u + z_k rho^theta) (u + z_k theta rho^theta).
double eval_entropy_flux(double rho, double m, const EntropyPair& pair,
                         const ModelParams& params);

/// (d eta / d rho, d eta / d m). Throws VacuumError for rho <= rho_floor.
Eigen::Vector2d entropy_grad(double rho, double m, const EntropyPair& pair,
                             const ModelParams& params);

/// d^2 eta / dm^2 = (c / rho) sum_k w_k g''(u + z_k rho^theta).
double entropy_dmm(double rho, double m, const EntropyPair& pair,
                   const ModelParams& params);

/// <grad^2 eta(U) U_x, U_x> written in (rho_x, u_x). Reduces to
/// hessian_energy_quadratic() for g = xi^2 / 2.
double entropy_hessian_form(double rho, double m, double drho_dx, double du_dx,
                            const EntropyPair& pair, const ModelParams& params);

/// Cellwise eta and H over a whole state (vacuum cells give 0).
Field entropy_field(const FieldState& s, const EntropyPair& pair,
                    const ModelParams& params);
Field entropy_flux_field(const FieldState& s, const EntropyPair& pair,
                         const ModelParams& params);

/// Mechanical energy m^2 / (2 rho) + kappa rho^gamma / (gamma - 1).
double mechanical_energy(double rho, double m, const ModelParams& params);
/// Its flux u (eta_E + p).
double mechanical_energy_flux(double rho, double m, const ModelParams& params);

/// kappa gamma rho^(gamma - 2) rho_x^2 + rho u_x^2.
double hessian_energy_quadratic(double rho, double drho_dx, double du_dx,
                                const ModelParams& params);

struct RelativeEntropyRef {
  double rho_star = 1.0;
};

/// Throws ParameterError unless rho_star > 0.
RelativeEntropyRef make_relative_entropy_ref(double rho_star);

/// m^2 / (2 max(rho, floor)) + p(rho) - p(rho*) - p'(rho*) (rho - rho*).
double eval_eta_star(double rho, double m, const RelativeEntropyRef& ref,
                     const ModelParams& params);

/// Pointwise pieces of the pressure-law inequalities for p(a) = a^gamma.
struct PressureTerms {
  double diff_pow;      // |a - b|^(gamma + 1)
  double monotone;      // (a - b) (p(a) - p(b))
  double bregman;       // p(a) - p(b) - p'(b) (a - b)
  double lower_power;   // |a - b|^2 for gamma <= 2, |a - b|^gamma otherwise
  double abs_diff;      // |a - b|
};

/// Throws DomainError unless 0 <= a, b <= M.
PressureTerms pressure_inequality_terms(double a, double b, double M, double gamma);

struct RatioRange {
  double min = 0.0;
  double max = 0.0;
  bool bounded() const;
};

/// Extremal ratios over a uniform samples x samples grid on [0, M]^2 (a = b
/// skipped):
///   monotone_ratio = |a-b|^(gamma+1) / ((a-b)(p(a)-p(b)))
///   lower_ratio    = bregman / lower_power
///   upper_ratio    = bregman / |a-b|
///   bregman_ratio  = bregman / ((a-b)(p(a)-p(b)))
/// pass is true iff every ratio stays finite and strictly positive.
struct PressureInequalityReport {
  RatioRange monotone_ratio;
  RatioRange lower_ratio;
  RatioRange upper_ratio;
  RatioRange bregman_ratio;
  int samples = 0;
  bool pass = false;
};

PressureInequalityReport check_pressure_inequalities(double M, double gamma,
                                                     int samples);

}  // namespace sel
