#pragma once

#include <vector>

#include "sel/field_state.hpp"
#include "sel/grid.hpp"
#include "sel/params.hpp"

namespace sel {

struct PmeState {
  Field rho;
  double t = 0.0;
};

/// Largest explicit step dx^2 / (2 max p'(rho)); +inf for a vacuum state.
double pme_max_dt(const PmeState& state, const ModelParams& params,
                  const Grid& grid);

/// One explicit conservative step of rho_t = p(rho)_xx with ghost cells
/// copying the boundary pressure. Throws PreconditionError when dt exceeds
/// pme_max_dt().
PmeState pme_step(const PmeState& state, double dt, const ModelParams& params,
                  const Grid& grid);

/// m = -(1/alpha) (p_{i+1} - p_{i-1}) / (2 dx), with m = 0 in the end cells.
Field darcy_momentum(const PmeState& state, const ModelParams& params,
                     const Grid& grid);

/// PME run recorded at the given times; each record also carries the Darcy
/// momentum so it can be compared with an Euler trajectory.
struct PmeTrajectory {
  std::vector<double> t;
  std::vector<FieldState> states;  // (rho, Darcy m)
};

/// Steps with cfl * pme_max_dt, shortened to hit each record time.
PmeTrajectory run_pme(const PmeState& state0, const std::vector<double>& record_times,
                      const ModelParams& params, const Grid& grid,
                      double cfl = 0.45);

/// Per record time: sum ((rho_a - rho_b)^2 + (m_a - m_b)^2) dx. Throws
/// AlignmentError when the times or grid sizes differ.
std::vector<double> compare_euler_pme(const std::vector<double>& t_euler,
                                      const std::vector<FieldState>& euler,
                                      const PmeTrajectory& pme, const Grid& grid);

}  // namespace sel
