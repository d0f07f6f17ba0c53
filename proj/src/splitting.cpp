#include "sel/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sel/errors.hpp"

namespace sel {

SplitMode parse_split_mode(const std::string& name) {
  if (name == "interpolated") return SplitMode::Interpolated;
  if (name == "endpoint") return SplitMode::Endpoint;
  throw ParameterError("unknown splitting mode '" + name + "'");
}

void SplitConfig::validate() const {
  if (N < 1) throw ParameterError("split: N must be at least 1");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ParameterError("split: T must be >= 0");
  for (std::size_t k = 0; k < record_times.size(); ++k) {
    const double t = record_times[k];
    if (!(t >= 0.0 && t <= T * (1.0 + 1e-12)))
      throw ParameterError("split: record time outside [0, T]");
    if (k > 0 && !(t > record_times[k - 1]))
      throw ParameterError("split: record times must increase strictly");
  }
}

std::vector<double> record_grid(double T, int N, int every) {
  if (N < 1 || every < 1) throw ParameterError("record_grid: N and every must be >= 1");
  std::vector<double> out;
  for (int n = 0; n < N; n += every) out.push_back(T * n / N);
  if (T > 0.0 || out.empty()) out.push_back(T);
  return out;
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(snapshots.size());
  for (const auto& s : snapshots) t.push_back(s.t);
  return t;
}

SnapshotDiagnostics diagnose(const FieldState& s, double rho_star,
                             const ModelParams& params, const Grid& grid) {
  SnapshotDiagnostics d;
  const double dx = grid.dx();
  d.mass = s.mass(dx);
  const RiemannInvariants ri = compute_invariants(s, params);
  d.max_w = ri.max_w;
  d.min_z = ri.min_z;
  d.l2_rho_dev = (s.rho - rho_star).square().sum() * dx;
  d.l2_m = s.m.square().sum() * dx;
  d.max_rho = s.rho.maxCoeff();
  d.max_abs_u = velocity(s, params.rho_floor()).abs().maxCoeff();
  return d;
}

namespace {

// Where a record time falls relative to the window grid.
struct RecordSlot {
  int window;        // record belongs to (t_n, t_{n+1}], or -1 for t = 0
  bool at_boundary;  // t == t_{window + 1}
};

RecordSlot locate(double t, const SplitConfig& split) {
  if (t <= 0.0) return {-1, true};
  const double k = t / split.tau();
  const double r = std::nearbyint(k);
  if (std::abs(k - r) <= 1e-9 * std::max(1.0, k))
    return {static_cast<int>(r) - 1, true};
  return {static_cast<int>(std::floor(k)), false};
}

}  // namespace

Trajectory lie_trotter_run(const FieldState& state0, const BrownianPath& path,
                           const ModelParams& params, const Grid& grid,
                           const SplitConfig& split, const DetSolverConfig& det,
                           const StochStepConfig& stoch, const NoiseSpec& noise,
                           SplitObserver* observer) {
  split.validate();
  det.validate();
  stoch.validate();
  if (state0.size() != grid.size())
    throw PreconditionError("initial state and grid sizes differ");

  StochStepConfig scfg = stoch;
  scfg.theta = params.theta();
  if (scfg.clamp && scfg.envelope <= 0.0) {
    const RiemannInvariants ri = compute_invariants(state0, params);
    scfg.envelope = std::max(ri.max_w, -ri.min_z);
  }

  Trajectory traj;
  traj.rho_star = state0.mass(grid.dx());
  traj.max_rho = state0.rho.maxCoeff();

  auto record = [&](double t, FieldState s) {
    s.t = t;
    traj.max_rho = std::max(traj.max_rho, s.rho.maxCoeff());
    SnapshotDiagnostics d = diagnose(s, traj.rho_star, params, grid);
    traj.snapshots.push_back(Snapshot{t, std::move(s), d});
  };

  // Bucket record times by window.
  std::vector<std::vector<double>> interior(split.N);
  std::vector<char> at_end(split.N, 0);
  bool record_initial = false;
  for (double t : split.record_times) {
    if (split.T == 0.0) {
      record_initial = true;
      continue;
    }
    const RecordSlot slot = locate(t, split);
    if (slot.window < 0) {
      record_initial = true;
    } else if (slot.at_boundary) {
      at_end[std::min(slot.window, split.N - 1)] = 1;
    } else {
      if (split.mode == SplitMode::Endpoint)
        throw AlignmentError("endpoint mode records only at window boundaries");
      interior[slot.window].push_back(t);
    }
  }
  if (record_initial) record(0.0, state0);

  const double tau = split.tau();
  FieldState U = state0;
  U.t = 0.0;
  for (int n = 0; n < split.N; ++n) {
    const double t_n = split.grid_time(n);
    const double t_next = split.grid_time(n + 1);
    if (observer) observer->window_start(n, t_n, U);
    try {
      FieldState V = apply_S(U, tau, params, grid, det);

      for (double t : interior[n]) {
        const FieldState Ubar = apply_S(U, t - t_n, params, grid, det);
        ClampLog scratch;
        const FieldState Utilde = apply_R(V, t_n, t, path, noise, grid, scfg, &scratch);
        const double wt = (t - t_n) / tau;
        FieldState mix((1.0 - wt) * Ubar.rho + wt * Utilde.rho,
                       (1.0 - wt) * Ubar.m + wt * Utilde.m, t);
        record(t, std::move(mix));
      }

      const std::size_t k0 = path.index_of(t_n);
      const std::size_t k1 = path.index_of(t_next);
      if (k1 > path.size())
        throw PathExhausted("Brownian path ends at " + std::to_string(path.duration()) +
                            ", needed " + std::to_string(t_next));
      for (std::size_t k = k0; k < k1; ++k) {
        if (observer)
          observer->stoch_substep(n, path.dt() * static_cast<double>(k), V, path[k],
                                  path.dt());
        V = stoch_substep(V, path[k], noise, grid, scfg, &traj.clamp);
      }
      V.t = t_next;
      U = std::move(V);
    } catch (const NumericalBlowup& e) {
      throw NumericalBlowup(std::string(e.what()) + " (window " + std::to_string(n) + ")",
                            e.cell(), n);
    }
    traj.max_rho = std::max(traj.max_rho, U.rho.maxCoeff());
    if (observer) observer->window_end(n, t_next, U);
    if (at_end[n]) record(t_next, U);
  }
  return traj;
}

TestFunction make_bump_test_function(const Grid& grid, double lo, double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo < hi))
    throw PreconditionError("test function support must be inside [0, 1]");
  const Eigen::Index n = grid.size();
  TestFunction tf{Field::Zero(n), Field::Zero(n), Field::Zero(n)};
  const double half = 0.5 * (hi - lo);
  const double peak = std::pow(half * half, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.center(i);
    if (x <= lo || x >= hi) continue;
    // q = (x - lo)(hi - x), phi = q^3.
    const double q = (x - lo) * (hi - x);
    const double dq = (hi - x) - (x - lo);
    const double d2q = -2.0;
    tf.phi[i] = q * q * q / peak;
    tf.dphi[i] = 3.0 * q * q * dq / peak;
    tf.d2phi[i] = (6.0 * q * dq * dq + 3.0 * q * q * d2q) / peak;
  }
  return tf;
}

namespace {

void check_test_function(const TestFunction& tf, const Grid& grid) {
  const Eigen::Index n = grid.size();
  if (tf.phi.size() != n || tf.dphi.size() != n || tf.d2phi.size() != n)
    throw PreconditionError("test function size does not match the grid");
  if (n < 5) throw PreconditionError("grid too small for an interior test function");
  for (Eigen::Index i : {Eigen::Index{0}, Eigen::Index{1}, n - 2, n - 1})
    if (tf.phi[i] != 0.0 || tf.dphi[i] != 0.0 || tf.d2phi[i] != 0.0)
      throw PreconditionError("test function must vanish on the two end cells at each side");
}

}  // namespace

double entropy_rate(const FieldState& s, const EntropyPair& pair,
                    const ModelParams& params, const Grid& grid,
                    const TestFunction& tf) {
  const Eigen::Index n = s.size();
  const double dx = grid.dx();
  const double eps = params.epsilon();
  const double floor = params.rho_floor();
  double acc = 0.0;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double phi = tf.phi[i];
    const double dphi = tf.dphi[i];
    const double d2phi = tf.d2phi[i];
    if (phi == 0.0 && dphi == 0.0 && d2phi == 0.0) continue;
    const double rho = s.rho[i];
    const double m = s.m[i];
    double term = eval_entropy_flux(rho, m, pair, params) * dphi +
                  eps * eval_entropy(rho, m, pair, params) * d2phi;
    if (phi != 0.0) {
      const Eigen::Vector2d grad = entropy_grad(rho, m, pair, params);
      const double rho_x = (s.rho[i + 1] - s.rho[i - 1]) / (2.0 * dx);
      const double u_x = (s.m[i + 1] / std::max(s.rho[i + 1], floor) -
                          s.m[i - 1] / std::max(s.rho[i - 1], floor)) /
                         (2.0 * dx);
      const double q = entropy_hessian_form(rho, m, rho_x, u_x, pair, params);
      term -= (params.alpha() * m * grad[1] + eps * q) * phi;
    }
    acc += term;
  }
  return acc * dx;
}

namespace {

double weighted_entropy(const FieldState& s, const EntropyPair& pair,
                        const ModelParams& params, const TestFunction& tf,
                        double dx) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (tf.phi[i] != 0.0) acc += eval_entropy(s.rho[i], s.m[i], pair, params) * tf.phi[i];
  return acc * dx;
}

class EntropyBalanceObserver : public SplitObserver {
 public:
  EntropyBalanceObserver(const EntropyPair& pair, const ModelParams& params,
                         const Grid& grid, const NoiseSpec& noise,
                         const TestFunction& tf, double tau)
      : pair_(pair), params_(params), grid_(grid), noise_(noise), tf_(tf), tau_(tau) {}

  void window_start(int, double, const FieldState& U) override {
    eta_start_ = weighted_entropy(U, pair_, params_, tf_, grid_.dx());
    rate_start_ = entropy_rate(U, pair_, params_, grid_, tf_);
    stoch_ = 0.0;
  }

  void stoch_substep(int, double, const FieldState& pre, double dW,
                     double dt) override {
    if (noise_.is_zero()) return;
    double mart = 0.0;
    double ito = 0.0;
    for (Eigen::Index i = 1; i + 1 < pre.size(); ++i) {
      const double phi = tf_.phi[i];
      if (phi == 0.0) continue;
      const double rho = pre.rho[i];
      const double m = pre.m[i];
      const double sig = default_sigma(grid_.center(i), rho, m, noise_);
      if (sig == 0.0) continue;
      mart += sig * entropy_grad(rho, m, pair_, params_)[1] * phi;
      ito += sig * sig * entropy_dmm(rho, m, pair_, params_) * phi;
    }
    stoch_ += (mart * dW + 0.5 * ito * dt) * grid_.dx();
  }

  void window_end(int, double t_next, const FieldState& U) override {
    const double eta_end = weighted_entropy(U, pair_, params_, tf_, grid_.dx());
    const double rate_end = entropy_rate(U, pair_, params_, grid_, tf_);
    const double r =
        (eta_end - eta_start_) - 0.5 * tau_ * (rate_start_ + rate_end) - stoch_;
    out.t.push_back(t_next);
    out.residual.push_back(r);
    cumulative_ += r;
    out.cumulative.push_back(cumulative_);
    out.max_abs = std::max(out.max_abs, std::abs(cumulative_));
  }

  EntropyResidualSeries out;

 private:
  const EntropyPair& pair_;
  const ModelParams& params_;
  const Grid& grid_;
  const NoiseSpec& noise_;
  const TestFunction& tf_;
  double tau_;
  double eta_start_ = 0.0;
  double rate_start_ = 0.0;
  double stoch_ = 0.0;
  double cumulative_ = 0.0;
};

}  // namespace

EntropyResidualSeries entropy_residual(const FieldState& state0,
                                       const BrownianPath& path,
                                       const ModelParams& params, const Grid& grid,
                                       const SplitConfig& split,
                                       const DetSolverConfig& det,
                                       const StochStepConfig& stoch,
                                       const NoiseSpec& noise,
                                       const EntropyPair& pair,
                                       const TestFunction& tf) {
  check_test_function(tf, grid);
  SplitConfig cfg = split;
  cfg.record_times.clear();
  EntropyBalanceObserver obs(pair, params, grid, noise, tf, cfg.tau());
  lie_trotter_run(state0, path, params, grid, cfg, det, stoch, noise, &obs);
  return std::move(obs.out);
}

TauStudy tau_refinement_study(const FieldState& state0,
                              const std::vector<BrownianPath>& base_paths,
                              const ModelParams& params, const Grid& grid,
                              double T, const std::vector<double>& taus,
                              double det_dt_max, const DetSolverConfig& det,
                              const StochStepConfig& stoch,
                              const NoiseSpec& noise) {
  if (taus.size() < 2) throw PreconditionError("tau study needs at least two taus");
  if (base_paths.empty()) throw PreconditionError("tau study needs at least one path");
  if (!(det_dt_max > 0.0)) throw PreconditionError("det_dt_max must be positive");
  for (std::size_t k = 1; k < taus.size(); ++k)
    if (std::abs(taus[k] - 0.5 * taus[k - 1]) > 1e-12 * taus[k - 1])
      throw PreconditionError("taus must form a halving sequence");

  std::vector<SplitConfig> splits;
  std::vector<DetSolverConfig> dets;
  for (double tau : taus) {
    const double windows = std::nearbyint(T / tau);
    if (windows < 1.0 || std::abs(windows * tau - T) > 1e-9 * T)
      throw AlignmentError("T must be a whole number of windows for every tau");
    SplitConfig sc;
    sc.T = T;
    sc.N = static_cast<int>(windows);
    sc.mode = SplitMode::Endpoint;
    sc.record_times = {T};
    splits.push_back(sc);
    DetSolverConfig dc = det;
    dc.fixed_dt = tau / std::ceil(tau / det_dt_max * (1.0 - 1e-12));
    dets.push_back(dc);
  }

  TauStudy study;
  study.taus = taus;
  study.errors.assign(taus.size() - 1, 0.0);
  const double dx = grid.dx();
  for (const BrownianPath& base : base_paths) {
    BrownianPath path = base;
    FieldState prev;
    for (std::size_t k = 0; k < taus.size(); ++k) {
      if (k > 0) path = refine(path);
      Trajectory tr = lie_trotter_run(state0, path, params, grid, splits[k],
                                      dets[k], stoch, noise);
      FieldState fin = std::move(tr.snapshots.back().state);
      if (k > 0) {
        const double e2 = ((fin.rho - prev.rho).square().sum() +
                           (fin.m - prev.m).square().sum()) * dx;
        study.errors[k - 1] += std::sqrt(e2);
      }
      prev = std::move(fin);
    }
  }
  for (double& e : study.errors) e /= static_cast<double>(base_paths.size());
  for (std::size_t k = 0; k + 1 < study.errors.size(); ++k)
    study.ratios.push_back(study.errors[k] / study.errors[k + 1]);
  return study;
}

}  // namespace sel
