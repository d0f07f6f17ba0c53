#include "sel/det_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sel/errors.hpp"

namespace sel {

FluxScheme parse_flux_scheme(const std::string& name) {
  if (name == "rusanov") return FluxScheme::Rusanov;
  if (name == "none") return FluxScheme::None;
  throw ParameterError("unknown flux scheme '" + name + "'");
}

void DetSolverConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 0.9)) throw ParameterError("cfl must lie in (0, 0.9]");
  if (!(rho_floor > 0.0)) throw ParameterError("rho_floor must be positive");
  if (!(fixed_dt >= 0.0)) throw ParameterError("fixed_dt must be nonnegative");
}

namespace {

double max_wave_speed(const FieldState& s, const ModelParams& params,
                      double floor) {
  double a = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double rho = std::max(s.rho[i], 0.0);
    const double u = s.m[i] / std::max(rho, floor);
    a = std::max(a, std::abs(u) + sound_speed(rho, params));
  }
  return a;
}

void check_finite(const FieldState& s) {
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (!std::isfinite(s.rho[i]) || !std::isfinite(s.m[i]))
      throw NumericalBlowup("non-finite state in cell " + std::to_string(i), i);
}

}  // namespace

double stable_dt(const FieldState& state, const ModelParams& params,
                 const Grid& grid, const DetSolverConfig& config) {
  const double dx = grid.dx();
  double bound = std::numeric_limits<double>::infinity();
  if (config.flux_scheme == FluxScheme::Rusanov) {
    const double a = max_wave_speed(state, params, config.rho_floor);
    if (a > 0.0) bound = dx / a;
  }
  if (params.epsilon() > 0.0)
    bound = std::min(bound, dx * dx / (2.0 * params.epsilon()));
  return config.cfl * bound;
}

FieldState det_step(const FieldState& state, double dt, const ModelParams& params,
                    const Grid& grid, const DetSolverConfig& config) {
  const Eigen::Index n = state.size();
  if (n != grid.size()) throw PreconditionError("state and grid sizes differ");
  if (!(dt >= 0.0)) throw PreconditionError("dt must be nonnegative");
  const double dx = grid.dx();
  const double eps = params.epsilon();
  const double floor = config.rho_floor;
  const bool convect = config.flux_scheme == FluxScheme::Rusanov;

  // Extended arrays with one ghost on each side.
  std::vector<double> r(n + 2), m(n + 2), u(n + 2), f2(n + 2), speed(n + 2);
  check_finite(state);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (state.rho[i] < 0.0)
      throw PreconditionError("negative density in cell " + std::to_string(i));
    r[i + 1] = state.rho[i];
    m[i + 1] = state.m[i];
  }
  r[0] = r[1];
  m[0] = -m[1];
  r[n + 1] = r[n];
  m[n + 1] = -m[n];

  double amax = 0.0;
  if (convect) {
    for (Eigen::Index j = 0; j < n + 2; ++j) {
      u[j] = m[j] / std::max(r[j], floor);
      f2[j] = m[j] * u[j] + pressure_unchecked(r[j], params);
      speed[j] = std::abs(u[j]) + sound_speed(r[j], params);
      amax = std::max(amax, speed[j]);
    }
  }
  constexpr double slack = 1.0 + 1e-12;
  if (dt * amax / dx > slack || dt * 2.0 * eps / (dx * dx) > slack)
    throw PreconditionError("dt exceeds the explicit stability limit");
  if (params.alpha() * dt > 1.0)
    throw PreconditionError("alpha * dt must not exceed 1");

  // Interface fluxes F_{j+1/2} between extended cells j and j+1.
  std::vector<double> fr(n + 1), fm(n + 1);
  const double nu = eps / dx;
  for (Eigen::Index j = 0; j <= n; ++j) {
    double a = 0.0, cr = 0.0, cm = 0.0;
    if (convect) {
      a = std::max(speed[j], speed[j + 1]);
      cr = 0.5 * (m[j] + m[j + 1]);
      cm = 0.5 * (f2[j] + f2[j + 1]);
    }
    fr[j] = cr - (0.5 * a + nu) * (r[j + 1] - r[j]);
    fm[j] = cm - (0.5 * a + nu) * (m[j + 1] - m[j]);
  }

  const double lam = dt / dx;
  const double decay = 1.0 - params.alpha() * dt;
  FieldState out{Field(n), Field(n), state.t + dt};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.rho[i] = r[i + 1] - lam * (fr[i + 1] - fr[i]);
    out.m[i] = decay * (m[i + 1] - lam * (fm[i + 1] - fm[i]));
  }
  out.m[0] = 0.0;
  out.m[n - 1] = 0.0;
  check_finite(out);
  return out;
}

FieldState apply_S(const FieldState& state, double elapsed,
                   const ModelParams& params, const Grid& grid,
                   const DetSolverConfig& config) {
  if (!(elapsed >= 0.0)) throw PreconditionError("elapsed must be nonnegative");
  config.validate();
  FieldState cur = state;
  const double t_end = state.t + elapsed;
  if (elapsed == 0.0) return cur;

  if (config.fixed_dt > 0.0) {
    const double h = config.fixed_dt;
    const auto full = static_cast<long>(std::floor(elapsed / h * (1.0 + 1e-12)));
    for (long k = 0; k < full; ++k) cur = det_step(cur, h, params, grid, config);
    const double rest = elapsed - static_cast<double>(full) * h;
    if (rest > 1e-12 * h) cur = det_step(cur, rest, params, grid, config);
  } else {
    double done = 0.0;
    while (done < elapsed) {
      double h = stable_dt(cur, params, grid, config);
      const double left = elapsed - done;
      if (h >= left * (1.0 - 1e-12)) h = left;
      cur = det_step(cur, h, params, grid, config);
      done = (h == left) ? elapsed : done + h;
    }
  }
  cur.t = t_end;
  return cur;
}

RiemannInvariants compute_invariants(const FieldState& state,
                                     const ModelParams& params) {
  RiemannInvariants ri;
  const Field u = velocity(state, params.rho_floor());
  const Field s = state.rho.max(0.0).pow(params.theta());
  ri.w = u + s;
  ri.z = u - s;
  ri.max_w = state.size() ? ri.w.maxCoeff() : 0.0;
  ri.min_z = state.size() ? ri.z.minCoeff() : 0.0;
  return ri;
}

}  // namespace sel
