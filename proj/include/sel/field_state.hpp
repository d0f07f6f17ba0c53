#pragma once

#include <Eigen/Core>

namespace sel {

using Field = Eigen::ArrayXd;

/// Cell averages of density and momentum at time t.
struct FieldState {
  Field rho;
  Field m;
  double t = 0.0;

  FieldState() = default;
  FieldState(Field rho_, Field m_, double t_ = 0.0)
      : rho(std::move(rho_)), m(std::move(m_)), t(t_) {}

  Eigen::Index size() const { return rho.size(); }

  double mass(double dx) const { return rho.sum() * dx; }

  bool all_finite() const { return rho.allFinite() && m.allFinite(); }

  friend bool operator==(const FieldState& a, const FieldState& b) {
    return a.t == b.t && a.rho.size() == b.rho.size() &&
           (a.rho == b.rho).all() && (a.m == b.m).all();
  }
};

/// Velocity with the vacuum guard u = m / max(rho, floor).
inline Field velocity(const FieldState& s, double rho_floor) {
  return s.m / s.rho.max(rho_floor);
}

}  // namespace sel
