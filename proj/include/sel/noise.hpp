#pragma once

#include "sel/params.hpp"

namespace sel {

/// Multiplicative noise coefficient sigma(x, rho, m) of the default family
///
///   sigma = a * m * sin(pi x) * bump_rho(rho / M1) * bump_m(m / (M1 M2))
///
/// where bump_rho(q) = 64 q^3 (1 - q)^3 on [0, 1] and bump_m(r) = (1 - r^2)^3
/// on [-1, 1], both C^2 and zero outside. The amplitude a = sqrt(A0) / L uses
/// the analytic bound L on |grad_(rho,m)| of the unscaled profile, so the
/// state-Lipschitz constant of sigma never exceeds sqrt(A0).
struct NoiseSpec {
  double A0 = 0.0;
  double rho_max = 1.0;  // M1
  double m_max = 1.0;    // M1 * M2
  double amplitude = 0.0;

  bool is_zero() const { return amplitude == 0.0; }

  /// Support box [0, M1] x [-M1 M2, M1 M2].
  bool in_support_box(double rho, double m) const {
    return rho > 0.0 && rho < rho_max && m > -m_max && m < m_max;
  }
};

NoiseSpec make_noise_spec(double A0, double M1, double M2);
inline NoiseSpec make_noise_spec(const ModelParams& p) {
  return make_noise_spec(p.A0(), p.M1(), p.M2());
}

/// Upper bound of |grad_(rho,m) (m bump_rho bump_m)| over the box.
double noise_profile_lipschitz(double M1, double M2);

double noise_envelope(double x);

double default_sigma(double x, double rho, double m, const NoiseSpec& ns);

}  // namespace sel
