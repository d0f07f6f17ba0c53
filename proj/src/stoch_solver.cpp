#include "sel/stoch_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sel/errors.hpp"

namespace sel {

void StochStepConfig::validate() const {
  if (substeps_per_interval < 1)
    throw ParameterError("substeps_per_interval must be at least 1");
}

FieldState stoch_substep(const FieldState& state, double dW,
                         const NoiseSpec& noise, const Grid& grid) {
  FieldState out = state;
  if (noise.is_zero() || dW == 0.0) return out;
  const Eigen::Index n = state.size();
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    out.m[i] += default_sigma(grid.center(i), state.rho[i], state.m[i], noise) * dW;
  return out;
}

FieldState stoch_substep(const FieldState& state, double dW,
                         const NoiseSpec& noise, const Grid& grid,
                         const StochStepConfig& config, ClampLog* log) {
  FieldState out = stoch_substep(state, dW, noise, grid);
  if (!config.clamp) return out;
  const Eigen::Index n = state.size();
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double rho = state.rho[i];
    const double m_old = state.m[i];
    if (!noise.in_support_box(rho, m_old)) continue;
    double lo = -noise.m_max;
    double hi = noise.m_max;
    if (config.envelope > 0.0) {
      const double s = std::pow(rho, config.theta);
      lo = std::max(lo, rho * (s - config.envelope));
      hi = std::min(hi, rho * (config.envelope - s));
    }
    lo = std::min(lo, m_old);
    hi = std::max(hi, m_old);
    const double clamped = std::clamp(out.m[i], lo, hi);
    if (clamped != out.m[i]) {
      if (log) {
        ++log->count;
        log->total += std::abs(clamped - out.m[i]);
      }
      out.m[i] = clamped;
    }
  }
  return out;
}

FieldState apply_R(const FieldState& state, double t_n, double t,
                   const BrownianPath& path, const NoiseSpec& noise,
                   const Grid& grid, const StochStepConfig& config,
                   ClampLog* log) {
  if (!(t >= t_n)) throw PreconditionError("apply_R needs t >= t_n");
  const std::size_t k0 = path.index_of(t_n);
  const std::size_t k1 = path.index_of(t);
  if (k1 > path.size())
    throw PathExhausted("Brownian path ends at " + std::to_string(path.duration()) +
                        ", needed " + std::to_string(t));
  FieldState cur = state;
  for (std::size_t k = k0; k < k1; ++k)
    cur = stoch_substep(cur, path[k], noise, grid, config, log);
  cur.t = t;
  return cur;
}

}  // namespace sel
