#include "sel/longtime.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sel/errors.hpp"

namespace sel {

std::pair<double, double> l2_deviation(const FieldState& state, double rho_star,
                                       const Grid& grid) {
  const double dx = grid.dx();
  return {(state.rho - rho_star).square().sum() * dx, state.m.square().sum() * dx};
}

TransformedState transform(const FieldState& state, double t, double M_scale,
                           double rho_star, const Grid& grid) {
  const double scale = std::exp(M_scale * t);
  const double dx = grid.dx();
  TransformedState ts;
  ts.M_scale = M_scale;
  ts.t = t;
  ts.w = scale * (state.rho - rho_star);
  ts.z = scale * state.m;
  ts.y.resize(state.size());
  double face = 0.0;  // y at the left face of cell i
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    ts.y[i] = face - 0.5 * dx * ts.w[i];
    face -= dx * ts.w[i];
  }
  ts.y_end = face;
  return ts;
}

LongTimeConstants make_longtime_constants(double Lambda, double rho_star,
                                          const ModelParams& params,
                                          double M_scale) {
  if (!(rho_star > 0.0)) throw ParameterError("rho_star must be positive");
  if (!(Lambda >= rho_star)) throw ParameterError("Lambda must be at least rho_star");
  if (!(M_scale > 0.0)) throw ParameterError("M_scale must be positive");
  LongTimeConstants c;
  c.Lambda = Lambda;
  c.rho_star = rho_star;
  c.alpha = params.alpha();
  c.A0 = params.A0();
  c.M_scale = M_scale;
  c.K = std::max(Lambda + 2.0 * rho_star, 2.0 * Lambda) / std::min(params.alpha(), 1.0);
  return c;
}

double compute_Q(const FieldState& state, double t, const LongTimeConstants& c,
                 const ModelParams& params, const Grid& grid, QForm form) {
  const TransformedState ts = transform(state, t, c.M_scale, c.rho_star, grid);
  const RelativeEntropyRef ref = make_relative_entropy_ref(c.rho_star);
  const double e2 = std::exp(2.0 * c.M_scale * t);
  const double coef = form == QForm::HalfAlpha ? 0.5 * c.alpha : 0.5;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const double eta = eval_eta_star(state.rho[i], state.m[i], ref, params);
    acc += c.K * e2 * eta + ts.y[i] * ts.z[i] + coef * ts.y[i] * ts.y[i];
  }
  return acc * grid.dx();
}

double domination_ratio(const FieldState& state, const LongTimeConstants& c,
                        const ModelParams& params, const Grid& grid) {
  // The e^{Mt} factors of y and z cancel against e^{-2Mt}, so evaluate at t = 0.
  const TransformedState ts = transform(state, 0.0, c.M_scale, c.rho_star, grid);
  const RelativeEntropyRef ref = make_relative_entropy_ref(c.rho_star);
  const bool high_gamma = params.gamma() > 2.0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const double d = state.rho[i] - c.rho_star;
    const double m = state.m[i];
    const double lhs = (high_gamma ? std::pow(std::abs(d), params.gamma()) : d * d) + m * m;
    if (lhs == 0.0) continue;
    const double rhs = c.K * eval_eta_star(state.rho[i], m, ref, params) +
                       ts.y[i] * ts.z[i] + 0.5 * c.alpha * ts.y[i] * ts.y[i];
    if (!(rhs > 0.0)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, lhs / rhs);
  }
  return worst;
}

PathSeries path_series(const Trajectory& traj, const ModelParams& params,
                       const Grid& grid) {
  PathSeries ps;
  const RelativeEntropyRef ref = make_relative_entropy_ref(traj.rho_star);
  for (const Snapshot& snap : traj.snapshots) {
    ps.t.push_back(snap.t);
    ps.dev.push_back(snap.diag.l2_rho_dev + snap.diag.l2_m);
    double eta = 0.0;
    for (Eigen::Index i = 0; i < snap.state.size(); ++i)
      eta += eval_eta_star(snap.state.rho[i], snap.state.m[i], ref, params);
    ps.eta_int.push_back(eta * grid.dx());
  }
  return ps;
}

namespace {

double pairwise(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += v[k];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise(v, h) + pairwise(v + h, n - h);
}

std::pair<double, double> mean_and_se(std::vector<double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = stable_sum(v) / n;
  for (double& x : v) x = (x - mean) * (x - mean);
  const double var = stable_sum(std::move(v)) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

double stable_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return pairwise(values.data(), values.size());
}

MomentSeries ensemble_moments(const std::vector<PathSeries>& paths) {
  if (paths.size() < 2) throw PreconditionError("ensemble_moments needs >= 2 paths");
  const std::vector<double>& t = paths.front().t;
  for (const PathSeries& p : paths)
    if (p.t != t || p.dev.size() != t.size() || p.eta_int.size() != t.size())
      throw AlignmentError("ensemble paths have different record times");

  MomentSeries out;
  out.t = t;
  out.n_paths = paths.size();
  std::vector<double> a(paths.size()), b(paths.size()), c(paths.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (std::size_t p = 0; p < paths.size(); ++p) {
      a[p] = paths[p].dev[k];
      b[p] = paths[p].eta_int[k];
      c[p] = b[p] * b[p];
    }
    auto [ma, sa] = mean_and_se(a);
    auto [mb, sb] = mean_and_se(b);
    auto [mc, sc] = mean_and_se(c);
    out.mean_dev.push_back(ma);
    out.se_dev.push_back(sa);
    out.mean_eta.push_back(mb);
    out.se_eta.push_back(sb);
    out.mean_eta_sq.push_back(mc);
    out.se_eta_sq.push_back(sc);
  }
  return out;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& v,
                   double t_lo, double t_hi) {
  if (t.size() != v.size()) throw PreconditionError("fit_decay: t and v differ in length");
  std::vector<double> ts, ls;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t_lo || t[k] > t_hi) continue;
    if (!(v[k] > 0.0))
      throw DomainError("fit_decay: nonpositive value at t = " + std::to_string(t[k]) +
                        "; shrink the window");
    ts.push_back(t[k]);
    ls.push_back(std::log(v[k]));
  }
  if (ts.size() < 2) throw PreconditionError("fit_decay: fewer than 2 points in window");

  const Eigen::Index n = static_cast<Eigen::Index>(ts.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    A(k, 0) = 1.0;
    A(k, 1) = ts[k];
    b[k] = ls[k];
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);

  DecayFit fit;
  fit.rate = -coef[1];
  fit.prefactor = std::exp(coef[0]);
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = ts.size();
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).square().sum();
  const double ss_res = (A * coef - b).squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

NoiseThresholdReport noise_threshold_report(const ModelParams& params,
                                            double C_dom) {
  NoiseThresholdReport r;
  r.A0 = params.A0();
  r.min_alpha_1 = std::min(params.alpha(), 1.0);
  r.C_dom = C_dom;
  r.C_tilde = 1.0 / std::max(1.0, C_dom);
  r.threshold = r.C_tilde * r.min_alpha_1;
  if (r.A0 == 0.0)
    r.regime = "deterministic regime";
  else if (r.A0 < r.threshold)
    r.regime = "inside regime";
  else
    r.regime = "outside proven regime";
  return r;
}

ItoFunctionalObserver::ItoFunctionalObserver(const LongTimeConstants& c,
                                             const ModelParams& params,
                                             const Grid& grid,
                                             const NoiseSpec& noise)
    : c_(c), params_(params), grid_(grid), noise_(noise) {}

void ItoFunctionalObserver::stoch_substep(int, double t, const FieldState& pre,
                                          double dW, double) {
  if (noise_.is_zero()) return;
  const TransformedState ts = transform(pre, t, c_.M_scale, c_.rho_star, grid_);
  const double e1 = std::exp(c_.M_scale * t);
  const double e2 = e1 * e1;
  double acc = 0.0;
  for (Eigen::Index i = 1; i + 1 < pre.size(); ++i) {
    const double sig = default_sigma(grid_.center(i), pre.rho[i], pre.m[i], noise_);
    if (sig == 0.0) continue;
    const double u = pre.m[i] / std::max(pre.rho[i], params_.rho_floor());
    acc += (c_.K * e2 * u + e1 * ts.y[i]) * sig;
  }
  S_ += acc * grid_.dx() * dW;
}

void ItoFunctionalObserver::window_end(int, double t_next, const FieldState&) {
  t.push_back(t_next);
  scaled.push_back(std::exp(-2.0 * c_.M_scale * t_next) * S_);
}

}  // namespace sel
