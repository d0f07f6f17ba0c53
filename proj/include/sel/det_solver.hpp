#pragma once

#include <string>

#include "sel/field_state.hpp"
#include "sel/grid.hpp"
#include "sel/params.hpp"

namespace sel {

enum class FluxScheme {
  Rusanov,  // local Lax-Friedrichs for the convective terms
  None,     // viscosity and damping only (pure heat equation for rho)
};

FluxScheme parse_flux_scheme(const std::string& name);

struct DetSolverConfig {
  double cfl = 0.25;
  double rho_floor = 1e-10;
  FluxScheme flux_scheme = FluxScheme::Rusanov;
  /// When positive, apply_S uses this substep instead of stable_dt(); the
  /// last substep is shortened to land on the requested time.
  double fixed_dt = 0.0;

  /// Throws ParameterError unless 0 < cfl <= 0.9, rho_floor > 0 and
  /// fixed_dt >= 0.
  void validate() const;
};

/// One forward-Euler step of the viscous damped system. Ghost cells carry
/// the mirrored density and the negated momentum, and m is reset to 0 in
/// both end cells afterwards.
///
/// Throws PreconditionError if a dt / dx > 1, 2 eps dt / dx^2 > 1 or
/// alpha dt > 1, and NumericalBlowup with the first non-finite cell. The
/// default cfl of 0.25 keeps every update a convex combination of
/// neighbouring states, which is what preserves the invariant region.
FieldState det_step(const FieldState& state, double dt, const ModelParams& params,
                    const Grid& grid, const DetSolverConfig& config = {});

/// cfl * min(dx / max(|u| + c), dx^2 / (2 eps)); +inf when neither bound
/// applies.
double stable_dt(const FieldState& state, const ModelParams& params,
                 const Grid& grid, const DetSolverConfig& config = {});

/// S(elapsed): substeps det_step until exactly `elapsed` has passed.
FieldState apply_S(const FieldState& state, double elapsed,
                   const ModelParams& params, const Grid& grid,
                   const DetSolverConfig& config = {});

struct RiemannInvariants {
  Field w;
  Field z;
  double max_w = 0.0;
  double min_z = 0.0;
};

/// w = u + rho^theta, z = u - rho^theta with u = m / max(rho, floor).
RiemannInvariants compute_invariants(const FieldState& state,
                                     const ModelParams& params);

}  // namespace sel
