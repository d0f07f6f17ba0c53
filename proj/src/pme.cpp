#include "sel/pme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sel/errors.hpp"

namespace sel {

double pme_max_dt(const PmeState& state, const ModelParams& params,
                  const Grid& grid) {
  double dp = 0.0;
  for (Eigen::Index i = 0; i < state.rho.size(); ++i)
    dp = std::max(dp, pressure_prime(std::max(state.rho[i], 0.0), params));
  if (dp == 0.0) return std::numeric_limits<double>::infinity();
  return grid.dx() * grid.dx() / (2.0 * dp);
}

PmeState pme_step(const PmeState& state, double dt, const ModelParams& params,
                  const Grid& grid) {
  const Eigen::Index n = state.rho.size();
  if (n != grid.size()) throw PreconditionError("PME state and grid sizes differ");
  if (!(dt >= 0.0) || dt > pme_max_dt(state, params, grid) * (1.0 + 1e-12))
    throw PreconditionError("PME step exceeds dx^2 / (2 max p')");
  const double dx = grid.dx();
  Field p(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (state.rho[i] < 0.0)
      throw PreconditionError("negative density in cell " + std::to_string(i));
    p[i] = pressure_unchecked(state.rho[i], params);
  }
  // Face fluxes (p_{i+1} - p_i) / dx; the two boundary faces carry zero flux.
  PmeState out{Field(n), state.t + dt};
  const double lam = dt / (dx * dx);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double right = i + 1 < n ? p[i + 1] - p[i] : 0.0;
    const double left = i > 0 ? p[i] - p[i - 1] : 0.0;
    out.rho[i] = state.rho[i] + lam * (right - left);
  }
  if (!out.rho.allFinite()) {
    Eigen::Index bad = 0;
    while (bad < n && std::isfinite(out.rho[bad])) ++bad;
    throw NumericalBlowup("non-finite PME density", bad);
  }
  return out;
}

Field darcy_momentum(const PmeState& state, const ModelParams& params,
                     const Grid& grid) {
  const Eigen::Index n = state.rho.size();
  Field m = Field::Zero(n);
  const double scale = -1.0 / (params.alpha() * 2.0 * grid.dx());
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    m[i] = scale * (pressure_unchecked(state.rho[i + 1], params) -
                    pressure_unchecked(state.rho[i - 1], params));
  return m;
}

PmeTrajectory run_pme(const PmeState& state0, const std::vector<double>& record_times,
                      const ModelParams& params, const Grid& grid, double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ParameterError("PME cfl must lie in (0, 1]");
  PmeTrajectory out;
  PmeState cur = state0;
  for (double target : record_times) {
    if (target < cur.t) throw PreconditionError("PME record times must not decrease");
    while (cur.t < target) {
      double dt = cfl * pme_max_dt(cur, params, grid);
      const double left = target - cur.t;
      const bool last = dt >= left * (1.0 - 1e-12);
      if (last) dt = left;
      cur = pme_step(cur, dt, params, grid);
      if (last) cur.t = target;
    }
    out.t.push_back(target);
    out.states.emplace_back(cur.rho, darcy_momentum(cur, params, grid), target);
  }
  return out;
}

std::vector<double> compare_euler_pme(const std::vector<double>& t_euler,
                                      const std::vector<FieldState>& euler,
                                      const PmeTrajectory& pme, const Grid& grid) {
  if (t_euler.size() != euler.size() || t_euler.size() != pme.t.size())
    throw AlignmentError("Euler and PME record counts differ");
  std::vector<double> out;
  for (std::size_t k = 0; k < euler.size(); ++k) {
    if (std::abs(t_euler[k] - pme.t[k]) > 1e-9 * std::max(1.0, std::abs(t_euler[k])))
      throw AlignmentError("Euler and PME record times differ");
    const FieldState& a = euler[k];
    const FieldState& b = pme.states[k];
    if (a.size() != grid.size() || b.size() != grid.size())
      throw AlignmentError("Euler and PME grids differ");
    out.push_back(((a.rho - b.rho).square().sum() + (a.m - b.m).square().sum()) *
                  grid.dx());
  }
  return out;
}

}  // namespace sel
