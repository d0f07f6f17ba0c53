#pragma once

#include "sel/brownian.hpp"
#include "sel/field_state.hpp"
#include "sel/grid.hpp"
#include "sel/noise.hpp"

namespace sel {

struct StochStepConfig {
  int substeps_per_interval = 4;
  /// Clamp m back into the admissible set after each substep.
  bool clamp = true;
  /// Invariant-region level C of the initial data (max w <= C, min z >= -C).
  /// When positive the clamp target is the noise box intersected with
  /// { -C + rho^theta <= u <= C - rho^theta }; otherwise the box alone.
  double envelope = 0.0;
  double theta = 0.5;

  /// Throws ParameterError when substeps_per_interval < 1.
  void validate() const;
};

/// Number of clamped cells and summed |clamp displacement|.
struct ClampLog {
  long count = 0;
  double total = 0.0;
};

/// m_i += sigma(x_i, rho_i, m_i) dW on interior cells; rho and the two end
/// cells are untouched.
FieldState stoch_substep(const FieldState& state, double dW,
                         const NoiseSpec& noise, const Grid& grid);

/// stoch_substep followed by the clamp of StochStepConfig. Only cells that
/// started inside the noise box are clamped.
FieldState stoch_substep(const FieldState& state, double dW,
                         const NoiseSpec& noise, const Grid& grid,
                         const StochStepConfig& config, ClampLog* log);

/// R(t, t_n): Euler-Maruyama over the path increments covering [t_n, t).
/// Throws AlignmentError if t_n or t is off the path grid and PathExhausted
/// if the path ends before t. The result is stamped with time t.
FieldState apply_R(const FieldState& state, double t_n, double t,
                   const BrownianPath& path, const NoiseSpec& noise,
                   const Grid& grid, const StochStepConfig& config = {},
                   ClampLog* log = nullptr);

}  // namespace sel
