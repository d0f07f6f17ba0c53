#pragma once

#include <string>
#include <vector>

#include "sel/brownian.hpp"
#include "sel/det_solver.hpp"
#include "sel/entropy.hpp"
#include "sel/field_state.hpp"
#include "sel/grid.hpp"
#include "sel/noise.hpp"
#include "sel/params.hpp"
#include "sel/stoch_solver.hpp"

namespace sel {

enum class SplitMode { Interpolated, Endpoint };

SplitMode parse_split_mode(const std::string& name);

struct SplitConfig {
  double T = 1.0;
  int N = 100;
  SplitMode mode = SplitMode::Endpoint;
  /// Sorted times in [0, T]. Endpoint mode accepts window boundaries only.
  std::vector<double> record_times;

  double tau() const { return T / N; }
  /// t_n = n T / N.
  double grid_time(int n) const { return T * n / N; }

  /// Throws ParameterError unless N >= 1, T >= 0 and record_times is
  /// strictly increasing inside [0, T].
  void validate() const;
};

/// 0, every `every`-th window boundary, and T.
std::vector<double> record_grid(double T, int N, int every);

struct SnapshotDiagnostics {
  double mass = 0.0;
  double max_w = 0.0;
  double min_z = 0.0;
  double l2_rho_dev = 0.0;  // sum (rho - rho*)^2 dx
  double l2_m = 0.0;        // sum m^2 dx
  double max_rho = 0.0;
  double max_abs_u = 0.0;
};

struct Snapshot {
  double t = 0.0;
  FieldState state;
  SnapshotDiagnostics diag;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  double rho_star = 0.0;
  /// Running max of rho over every window boundary and recorded state.
  double max_rho = 0.0;
  ClampLog clamp;

  std::vector<double> times() const;
};

SnapshotDiagnostics diagnose(const FieldState& s, double rho_star,
                             const ModelParams& params, const Grid& grid);

/// Hooks called by lie_trotter_run on the grid-point chain (not on the
/// extra legs evaluated for interpolated records).
class SplitObserver {
 public:
  virtual ~SplitObserver() = default;
  virtual void window_start(int /*n*/, double /*t_n*/, const FieldState& /*U_n*/) {}
  /// Called before each Euler-Maruyama substep of R with its increment.
  virtual void stoch_substep(int /*n*/, double /*t*/, const FieldState& /*pre*/,
                             double /*dW*/, double /*dt*/) {}
  virtual void window_end(int /*n*/, double /*t_next*/, const FieldState& /*U_next*/) {}
};

/// Lie-Trotter splitting U_{n+1} = R(t_{n+1}, t_n) S(tau) U_n. In
/// interpolated mode a record time t in (t_n, t_{n+1}] stores
///   ((t_{n+1} - t) / tau) S(t - t_n) U_n + ((t - t_n) / tau) R(t, t_n) S(tau) U_n.
/// When the clamp is on and stoch.envelope is 0, the envelope is taken from
/// the Riemann invariants of state0. NumericalBlowup is rethrown with the
/// window index.
Trajectory lie_trotter_run(const FieldState& state0, const BrownianPath& path,
                           const ModelParams& params, const Grid& grid,
                           const SplitConfig& split, const DetSolverConfig& det,
                           const StochStepConfig& stoch, const NoiseSpec& noise,
                           SplitObserver* observer = nullptr);

/// Compactly supported test function phi with its exact derivatives at the
/// cell centres.
struct TestFunction {
  Field phi;
  Field dphi;
  Field d2phi;
};

/// phi = ((x - lo)(hi - x))^3 on (lo, hi), normalised to peak 1.
TestFunction make_bump_test_function(const Grid& grid, double lo = 0.2,
                                     double hi = 0.8);

/// Deterministic entropy production rate
///   <H, phi'> - alpha <m d_m eta, phi> + eps <eta, phi''> - eps <Q, phi>
/// with Q the Hessian form of eta on centred differences.
double entropy_rate(const FieldState& s, const EntropyPair& pair,
                    const ModelParams& params, const Grid& grid,
                    const TestFunction& tf);

struct EntropyResidualSeries {
  std::vector<double> t;           // window end times
  std::vector<double> residual;    // per window
  std::vector<double> cumulative;  // running sum
  double max_abs = 0.0;            // max |cumulative|
};

/// Signed residual of the weak entropy balance over each window: change of
/// <eta, phi> minus the trapezoid of entropy_rate at the window ends minus
/// the accumulated sum of <sigma d_m eta, phi> dW + 0.5 <sigma^2 d_mm eta,
/// phi> dt over the substeps of R. Throws PreconditionError unless phi and
/// its derivatives vanish on the first and last two cells.
EntropyResidualSeries entropy_residual(const FieldState& state0,
                                       const BrownianPath& path,
                                       const ModelParams& params, const Grid& grid,
                                       const SplitConfig& split,
                                       const DetSolverConfig& det,
                                       const StochStepConfig& stoch,
                                       const NoiseSpec& noise,
                                       const EntropyPair& pair,
                                       const TestFunction& tf);

struct TauStudy {
  std::vector<double> taus;
  /// errors[k] = mean over paths of ||U_{tau_k}(T) - U_{tau_{k+1}}(T)||_L2.
  std::vector<double> errors;
  /// ratios[k] = errors[k] / errors[k + 1].
  std::vector<double> ratios;
};

/// Self-convergence in tau. base_paths are sampled at dt = taus[0] /
/// substeps and refined once per halving. The deterministic leg uses
/// det.fixed_dt = tau / ceil(tau / det_dt_max), so it takes one step per
/// window whenever tau <= det_dt_max.
TauStudy tau_refinement_study(const FieldState& state0,
                              const std::vector<BrownianPath>& base_paths,
                              const ModelParams& params, const Grid& grid,
                              double T, const std::vector<double>& taus,
                              double det_dt_max, const DetSolverConfig& det,
                              const StochStepConfig& stoch,
                              const NoiseSpec& noise);

}  // namespace sel
