#include "sel/noise.hpp"

#include <cmath>
#include <numbers>

#include "sel/errors.hpp"

namespace sel {

namespace {

double bump_rho(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  const double s = q * (1.0 - q);
  return 64.0 * s * s * s;
}

double bump_m(double r) {
  if (r <= -1.0 || r >= 1.0) return 0.0;
  const double s = 1.0 - r * r;
  return s * s * s;
}

}  // namespace

double noise_profile_lipschitz(double M1, double M2) {
  // d/dm [m bump_m(m/B)] = (1 - r^2)^2 (1 - 7 r^2), bounded by 1 at r = 0.
  const double dm_bound = 1.0;
  // |r bump_m(r)| peaks at r^2 = 1/7.
  const double r = 1.0 / std::sqrt(7.0);
  const double r_bump = r * std::pow(6.0 / 7.0, 3);
  // |bump_rho'(q)| = 192 s^2 sqrt(1 - 4 s), s = q (1 - q), peaks at s = 1/5.
  const double drho_bump = 192.0 / 25.0 / std::sqrt(5.0);
  const double drho_bound = (M1 * M2) * r_bump * drho_bump / M1;
  return std::hypot(dm_bound, drho_bound);
}

NoiseSpec make_noise_spec(double A0, double M1, double M2) {
  if (!(A0 >= 0.0) || !(M1 > 0.0) || !(M2 > 0.0))
    throw ParameterError("noise: need A0 >= 0, M1 > 0, M2 > 0");
  NoiseSpec ns;
  ns.A0 = A0;
  ns.rho_max = M1;
  ns.m_max = M1 * M2;
  ns.amplitude = std::sqrt(A0) / noise_profile_lipschitz(M1, M2);
  return ns;
}

double noise_envelope(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::sin(std::numbers::pi * x);
}

double default_sigma(double x, double rho, double m, const NoiseSpec& ns) {
  if (ns.amplitude == 0.0 || m == 0.0) return 0.0;
  const double cut = bump_rho(rho / ns.rho_max) * bump_m(m / ns.m_max);
  if (cut == 0.0) return 0.0;
  return ns.amplitude * m * noise_envelope(x) * cut;
}

}  // namespace sel
