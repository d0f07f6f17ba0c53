#include "sel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <ostream>
#include <thread>

#include "sel/entropy.hpp"
#include "sel/errors.hpp"
#include "sel/initial_data.hpp"
#include "sel/pme.hpp"

namespace sel {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base ^ ((index + 1) * 0x9E3779B97F4A7C15ULL));
}

int worker_count() {
  if (const char* env = std::getenv("SEL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t count =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < count; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

RunSetup make_setup(const RunConfig& cfg) {
  validate_config(cfg);
  const ModelParams params =
      make_params(cfg.gamma, cfg.alpha, cfg.epsilon, cfg.a0, cfg.m1, cfg.m2)
          .with_rho_floor(cfg.rho_floor);
  const Grid grid(cfg.n_cells);
  const InitialProfile prof =
      cfg.init_csv.empty()
          ? preset_profile(cfg.preset, grid, PresetShape{cfg.rho_base, cfg.amplitude})
          : load_profile_csv(cfg.init_csv, grid);
  FieldState state0 = mollify_initial_data(prof.rho0, prof.m0, params, grid);

  SplitConfig split;
  split.T = cfg.t_final;
  split.N = static_cast<int>(cfg.n_windows);
  split.mode = parse_split_mode(cfg.mode);
  split.record_times = record_grid(split.T, split.N, static_cast<int>(cfg.record_every));

  DetSolverConfig det;
  det.cfl = cfg.cfl;
  det.rho_floor = cfg.rho_floor;

  StochStepConfig stoch;
  stoch.substeps_per_interval = static_cast<int>(cfg.substeps);
  stoch.clamp = cfg.clamp;
  stoch.theta = params.theta();

  const double path_dt = split.tau() / static_cast<double>(cfg.substeps);
  const auto path_len = static_cast<std::size_t>(cfg.n_windows * cfg.substeps);
  return RunSetup{cfg,   params, grid,   std::move(state0), make_noise_spec(params),
                  split, det,    stoch,  path_dt,           path_len};
}

BrownianPath path_for(const RunSetup& setup, std::size_t index) {
  return sample_brownian(derive_seed(setup.cfg.seed, index), setup.path_dt,
                         setup.path_len);
}

Trajectory run_path(const RunSetup& setup, std::size_t index,
                    SplitObserver* observer) {
  return lie_trotter_run(setup.state0, path_for(setup, index), setup.params,
                         setup.grid, setup.split, setup.det, setup.stoch,
                         setup.noise, observer);
}

std::vector<Trajectory> run_ensemble(const RunSetup& setup, std::size_t paths,
                                     int threads) {
  std::vector<Trajectory> out(paths);
  parallel_for(paths, threads, [&](std::size_t i) { out[i] = run_path(setup, i); });
  return out;
}

PathwiseDecay pathwise_decay(const std::vector<PathSeries>& series, double t_lo,
                             double t_hi) {
  PathwiseDecay pd;
  for (const PathSeries& p : series) {
    DecayFit fit;
    try {
      fit = fit_decay(p.t, p.dev, t_lo, t_hi);
    } catch (const DomainError&) {
      fit.rate = std::numeric_limits<double>::quiet_NaN();
    }
    const double ratio = p.dev.front() > 0.0 ? p.dev.back() / p.dev.front() : 0.0;
    pd.fits.push_back(fit);
    pd.terminal_ratio.push_back(ratio);
    if (fit.rate > 0.0 && ratio <= 1e-2) ++pd.passing;
  }
  pd.fraction = series.empty() ? 0.0
                               : static_cast<double>(pd.passing) /
                                     static_cast<double>(series.size());
  return pd;
}

// ---------------------------------------------------------------- output

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& file) {
  const fs::path p(file);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file);
  return out;
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_number(v);
    first = false;
  }
  out << '\n';
}

constexpr const char* kSeriesHeader = "t,mass,max_w,min_z,l2_rho_dev,l2_m\n";

}  // namespace

void write_series_csv(const std::string& file, const Trajectory& traj) {
  auto out = open_out(file);
  out << kSeriesHeader;
  for (const Snapshot& s : traj.snapshots)
    write_row(out, {s.t, s.diag.mass, s.diag.max_w, s.diag.min_z, s.diag.l2_rho_dev,
                    s.diag.l2_m});
}

void write_mean_series_csv(const std::string& file,
                           const std::vector<Trajectory>& trajs) {
  if (trajs.empty()) throw PreconditionError("no trajectories to average");
  auto out = open_out(file);
  out << kSeriesHeader;
  const std::size_t rows = trajs.front().snapshots.size();
  const double count = static_cast<double>(trajs.size());
  std::vector<double> col(trajs.size());
  auto mean = [&](std::size_t k, double SnapshotDiagnostics::*f) {
    for (std::size_t p = 0; p < trajs.size(); ++p) col[p] = trajs[p].snapshots[k].diag.*f;
    return stable_sum(col) / count;
  };
  for (std::size_t k = 0; k < rows; ++k)
    write_row(out, {trajs.front().snapshots[k].t, mean(k, &SnapshotDiagnostics::mass),
                    mean(k, &SnapshotDiagnostics::max_w),
                    mean(k, &SnapshotDiagnostics::min_z),
                    mean(k, &SnapshotDiagnostics::l2_rho_dev),
                    mean(k, &SnapshotDiagnostics::l2_m)});
}

void write_fields_csv(const std::string& dir, const Trajectory& traj,
                      const Grid& grid) {
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "fields_t%04zu.csv", k);
    auto out = open_out((fs::path(dir) / name).string());
    out << "t,x,rho,m\n";
    const Snapshot& s = traj.snapshots[k];
    for (Eigen::Index i = 0; i < s.state.size(); ++i)
      write_row(out, {s.t, grid.center(i), s.state.rho[i], s.state.m[i]});
  }
}

void write_moments_csv(const std::string& file, const MomentSeries& m) {
  auto out = open_out(file);
  out << "t,mean_dev,se_dev,mean_eta_star,se_eta_star,mean_eta_star_sq,se_eta_star_sq\n";
  for (std::size_t k = 0; k < m.t.size(); ++k)
    write_row(out, {m.t[k], m.mean_dev[k], m.se_dev[k], m.mean_eta[k], m.se_eta[k],
                    m.mean_eta_sq[k], m.se_eta_sq[k]});
}

void write_decay_report(const std::string& file,
                        const std::vector<DecayReportRow>& rows) {
  auto out = open_out(file);
  out << "quantity,window_lo,window_hi,rate,prefactor,r_squared,n_paths\n";
  for (const auto& r : rows)
    out << r.quantity << ',' << format_number(r.fit.t_lo) << ','
        << format_number(r.fit.t_hi) << ',' << format_number(r.fit.rate) << ','
        << format_number(r.fit.prefactor) << ',' << format_number(r.fit.r_squared) << ','
        << r.n_paths << '\n';
}

namespace {

// -------------------------------------------------------------- manifest

struct Manifest {
  std::string command;
  const RunSetup* setup = nullptr;
  std::vector<std::uint64_t> seeds;
  json summary = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const std::string& dir) const {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["version"] = kVersion;
    j["command"] = command;
    json cfg = json::object();
    for (const auto& [k, v] : setup->cfg.echo()) cfg[k] = v;
    j["config"] = cfg;
    j["seeds"] = seeds;
    const auto now = std::chrono::system_clock::now();
    j["finished_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                             now.time_since_epoch())
                             .count();
    j["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    j["summary"] = summary;
    auto out = open_out((fs::path(dir) / "manifest.json").string());
    out << j.dump(2) << '\n';
  }
};

std::vector<std::uint64_t> seeds_for(const RunSetup& s, std::size_t paths) {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < paths; ++i) out.push_back(derive_seed(s.cfg.seed, i));
  return out;
}

int threads_of(const CommandOptions& opt) {
  return opt.threads ? std::max(*opt.threads, 1) : worker_count();
}

std::vector<PathSeries> all_series(const std::vector<Trajectory>& trajs,
                                   const RunSetup& s) {
  std::vector<PathSeries> out;
  for (const auto& t : trajs) out.push_back(path_series(t, s.params, s.grid));
  return out;
}

struct EnsembleProducts {
  std::vector<Trajectory> trajs;
  std::vector<PathSeries> series;
  MomentSeries moments;
  std::vector<DecayReportRow> fits;
};

DecayReportRow safe_fit(const std::string& name, const std::vector<double>& t,
                        const std::vector<double>& v, double lo, double hi,
                        std::size_t n_paths) {
  DecayReportRow row{name, {}, n_paths};
  try {
    row.fit = fit_decay(t, v, lo, hi);
  } catch (const std::exception&) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    row.fit = DecayFit{nan, nan, nan, lo, hi, 0};
  }
  return row;
}

EnsembleProducts ensemble_products(const RunSetup& s, std::size_t paths, int threads) {
  EnsembleProducts e;
  e.trajs = run_ensemble(s, paths, threads);
  e.series = all_series(e.trajs, s);
  const double lo = s.cfg.fit_lo, hi = s.cfg.fit_hi;
  if (paths >= 2) {
    e.moments = ensemble_moments(e.series);
    e.fits.push_back(safe_fit("mean_dev", e.moments.t, e.moments.mean_dev, lo, hi, paths));
    e.fits.push_back(safe_fit("mean_eta_star", e.moments.t, e.moments.mean_eta, lo, hi, paths));
    e.fits.push_back(
        safe_fit("mean_eta_star_sq", e.moments.t, e.moments.mean_eta_sq, lo, hi, paths));
  } else {
    e.fits.push_back(safe_fit("dev", e.series[0].t, e.series[0].dev, lo, hi, 1));
  }
  return e;
}

void write_ensemble(const std::string& dir, const EnsembleProducts& e) {
  write_mean_series_csv((fs::path(dir) / "series.csv").string(), e.trajs);
  if (e.trajs.size() >= 2)
    write_moments_csv((fs::path(dir) / "moments.csv").string(), e.moments);
}

json fit_json(const DecayFit& f) {
  return {{"rate", f.rate}, {"prefactor", f.prefactor}, {"r_squared", f.r_squared},
          {"window", {f.t_lo, f.t_hi}}};
}

std::size_t paths_of(const RunSetup& s) { return static_cast<std::size_t>(s.cfg.paths); }

}  // namespace

// -------------------------------------------------------------- commands

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const RunSetup s = make_setup(cfg);
  Manifest man{"simulate", &s, seeds_for(s, 1)};
  const Trajectory traj = run_path(s, 0);
  write_series_csv((fs::path(opt.out_dir) / "series.csv").string(), traj);
  write_fields_csv(opt.out_dir, traj, s.grid);
  const auto& last = traj.snapshots.back().diag;
  man.summary = {{"rho_star", traj.rho_star},
                 {"final_l2_rho_dev", last.l2_rho_dev},
                 {"final_l2_m", last.l2_m},
                 {"clamp_count", traj.clamp.count},
                 {"clamp_total", traj.clamp.total}};
  man.write(opt.out_dir);
  log << "simulate: " << traj.snapshots.size() << " snapshots written to " << opt.out_dir
      << '\n';
  return kExitOk;
}

int cmd_ensemble(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const RunSetup s = make_setup(cfg);
  const std::size_t paths = paths_of(s);
  Manifest man{"ensemble", &s, seeds_for(s, paths)};
  const EnsembleProducts e = ensemble_products(s, paths, threads_of(opt));
  write_ensemble(opt.out_dir, e);
  man.summary["paths"] = paths;
  man.write(opt.out_dir);
  log << "ensemble: " << paths << " paths written to " << opt.out_dir << '\n';
  return kExitOk;
}

int cmd_decay_fit(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const RunSetup s = make_setup(cfg);
  const std::size_t paths = paths_of(s);
  Manifest man{"decay-fit", &s, seeds_for(s, paths)};
  EnsembleProducts e = ensemble_products(s, paths, threads_of(opt));
  const PathwiseDecay pd = pathwise_decay(e.series, cfg.fit_lo, cfg.fit_hi);
  std::vector<DecayReportRow> rows = e.fits;
  for (std::size_t i = 0; i < pd.fits.size(); ++i)
    rows.push_back({"path_dev_" + std::to_string(i), pd.fits[i], 1});
  write_ensemble(opt.out_dir, e);
  write_decay_report((fs::path(opt.out_dir) / "decay_report.csv").string(), rows);

  double c_dom = 0.0;
  for (const auto& tr : e.trajs) {
    const LongTimeConstants c = make_longtime_constants(
        std::max(s.cfg.m1, tr.max_rho), tr.rho_star, s.params, s.m_scale());
    for (const auto& snap : tr.snapshots)
      c_dom = std::max(c_dom, domination_ratio(snap.state, c, s.params, s.grid));
  }
  const NoiseThresholdReport nt = noise_threshold_report(s.params, c_dom);
  man.summary = {{"paths", paths},
                 {"expectation_fit", fit_json(e.fits.front().fit)},
                 {"pathwise_fraction", pd.fraction},
                 {"domination_constant", c_dom},
                 {"noise_regime", nt.regime},
                 {"noise_threshold", nt.threshold}};
  man.write(opt.out_dir);
  log << "decay-fit: rate " << format_number(e.fits.front().fit.rate) << ", R^2 "
      << format_number(e.fits.front().fit.r_squared) << ", pathwise fraction "
      << format_number(pd.fraction) << ", " << nt.regime << '\n';
  return kExitOk;
}

namespace {

PmeTrajectory pme_from(const RunSetup& s) {
  return run_pme(PmeState{s.state0.rho, 0.0}, s.split.record_times, s.params, s.grid);
}

Trajectory pme_as_trajectory(const PmeTrajectory& pme, const RunSetup& s) {
  Trajectory tr;
  tr.rho_star = s.rho_star();
  for (std::size_t k = 0; k < pme.t.size(); ++k)
    tr.snapshots.push_back(
        {pme.t[k], pme.states[k], diagnose(pme.states[k], tr.rho_star, s.params, s.grid)});
  return tr;
}

}  // namespace

int cmd_pme(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const RunSetup s = make_setup(cfg);
  Manifest man{"pme", &s, {}};
  const Trajectory tr = pme_as_trajectory(pme_from(s), s);
  write_series_csv((fs::path(opt.out_dir) / "series.csv").string(), tr);
  write_fields_csv(opt.out_dir, tr, s.grid);
  const PathSeries ps = path_series(tr, s.params, s.grid);
  const DecayReportRow row = safe_fit("pme_dev", ps.t, ps.dev, cfg.fit_lo, cfg.fit_hi, 0);
  write_decay_report((fs::path(opt.out_dir) / "decay_report.csv").string(), {row});
  man.summary = {{"pme_fit", fit_json(row.fit)}};
  man.write(opt.out_dir);
  log << "pme: rate " << format_number(row.fit.rate) << ", R^2 "
      << format_number(row.fit.r_squared) << '\n';
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const RunSetup s = make_setup(cfg);
  const std::size_t paths = paths_of(s);
  Manifest man{"compare", &s, seeds_for(s, paths)};
  const PmeTrajectory pme = pme_from(s);
  const std::vector<Trajectory> trajs = run_ensemble(s, paths, threads_of(opt));

  std::vector<std::vector<double>> per_path(paths);
  for (std::size_t p = 0; p < paths; ++p) {
    std::vector<FieldState> states;
    for (const auto& snap : trajs[p].snapshots) states.push_back(snap.state);
    per_path[p] = compare_euler_pme(trajs[p].times(), states, pme, s.grid);
  }
  const std::vector<double> t = trajs.front().times();
  std::vector<double> mean(t.size());
  std::vector<double> col(paths);
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (std::size_t p = 0; p < paths; ++p) col[p] = per_path[p][k];
    mean[k] = stable_sum(col) / static_cast<double>(paths);
  }
  {
    auto out = open_out((fs::path(opt.out_dir) / "compare.csv").string());
    out << "t,mean_euler_pme_dev\n";
    for (std::size_t k = 0; k < t.size(); ++k) write_row(out, {t[k], mean[k]});
  }
  const PathSeries ps = path_series(pme_as_trajectory(pme, s), s.params, s.grid);
  std::vector<DecayReportRow> rows = {
      safe_fit("euler_pme_dev", t, mean, cfg.fit_lo, cfg.fit_hi, paths),
      safe_fit("pme_dev", ps.t, ps.dev, cfg.fit_lo, cfg.fit_hi, 0)};
  write_decay_report((fs::path(opt.out_dir) / "decay_report.csv").string(), rows);
  const double ratio = mean.front() > 0.0 ? mean.back() / mean.front() : 0.0;
  man.summary = {{"paths", paths}, {"terminal_over_initial", ratio},
                 {"pme_fit", fit_json(rows[1].fit)}};
  man.write(opt.out_dir);
  log << "compare: terminal/initial " << format_number(ratio) << '\n';
  return kExitOk;
}

int cmd_entropy_check(const RunConfig& cfg, const CommandOptions& opt,
                      std::ostream& log) {
  const RunSetup s = make_setup(cfg);
  Manifest man{"entropy-check", &s, seeds_for(s, 1)};
  const EntropyPair pair =
      make_entropy_pair(cfg.entropy, s.params, static_cast<int>(cfg.quad_nodes));
  const TestFunction tf = make_bump_test_function(s.grid);
  const EntropyResidualSeries r =
      entropy_residual(s.state0, path_for(s, 0), s.params, s.grid, s.split, s.det,
                       s.stoch, s.noise, pair, tf);
  {
    auto out = open_out((fs::path(opt.out_dir) / "entropy_residual.csv").string());
    out << "t,residual,cumulative\n";
    for (std::size_t k = 0; k < r.t.size(); ++k)
      write_row(out, {r.t[k], r.residual[k], r.cumulative[k]});
  }
  man.summary = {{"entropy", cfg.entropy}, {"max_abs_cumulative", r.max_abs}};
  man.write(opt.out_dir);
  log << "entropy-check: max |cumulative residual| " << format_number(r.max_abs) << '\n';
  return kExitOk;
}

namespace {

// Tracks invariants at every window boundary of one path.
class InvariantMonitor : public SplitObserver {
 public:
  InvariantMonitor(const ModelParams& params, const Grid& grid, double mass0)
      : params_(params), grid_(grid), mass0_(mass0) {}

  void window_start(int, double, const FieldState&) override { first_ = true; }

  void stoch_substep(int, double, const FieldState& pre, double, double) override {
    if (first_) {
      rho_before_ = pre.rho;
      first_ = false;
    }
  }

  void window_end(int, double, const FieldState& U) override {
    if (!first_ && !(U.rho == rho_before_).all()) rho_touched = true;
    const RiemannInvariants ri = compute_invariants(U, params_);
    max_w = std::max(max_w, ri.max_w);
    min_z = std::min(min_z, ri.min_z);
    mass_drift = std::max(mass_drift, std::abs(U.mass(grid_.dx()) - mass0_));
    boundary_m = std::max({boundary_m, std::abs(U.m[0]), std::abs(U.m[U.size() - 1])});
  }

  double max_w = -std::numeric_limits<double>::infinity();
  double min_z = std::numeric_limits<double>::infinity();
  double mass_drift = 0.0;
  double boundary_m = 0.0;
  bool rho_touched = false;

 private:
  const ModelParams& params_;
  const Grid& grid_;
  double mass0_;
  bool first_ = true;
  Field rho_before_;
};

}  // namespace

int cmd_invariants_check(const RunConfig& cfg, const CommandOptions& opt,
                         std::ostream& log) {
  const RunSetup s = make_setup(cfg);
  const std::size_t paths = paths_of(s);
  Manifest man{"invariants-check", &s, seeds_for(s, paths)};
  const RiemannInvariants ri0 = compute_invariants(s.state0, s.params);
  const double C = std::max(ri0.max_w, -ri0.min_z);
  const double mass0 = s.rho_star();

  struct PathResult {
    double max_w, min_z, mass_drift, boundary_m, min_eta, c_dom;
    bool rho_touched;
  };
  std::vector<PathResult> res(paths);
  parallel_for(paths, threads_of(opt), [&](std::size_t p) {
    InvariantMonitor mon(s.params, s.grid, mass0);
    const Trajectory tr = run_path(s, p, &mon);
    const LongTimeConstants c = make_longtime_constants(
        std::max(s.cfg.m1, tr.max_rho), tr.rho_star, s.params, s.m_scale());
    double min_eta = std::numeric_limits<double>::infinity();
    double c_dom = 0.0;
    const PathSeries ps = path_series(tr, s.params, s.grid);
    for (double v : ps.eta_int) min_eta = std::min(min_eta, v);
    for (const auto& snap : tr.snapshots)
      c_dom = std::max(c_dom, domination_ratio(snap.state, c, s.params, s.grid));
    res[p] = {mon.max_w, mon.min_z, mon.mass_drift, mon.boundary_m, min_eta, c_dom,
              mon.rho_touched};
  });

  PathResult agg{-std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity(), 0.0, 0.0,
                 std::numeric_limits<double>::infinity(), 0.0, false};
  for (const auto& r : res) {
    agg.max_w = std::max(agg.max_w, r.max_w);
    agg.min_z = std::min(agg.min_z, r.min_z);
    agg.mass_drift = std::max(agg.mass_drift, r.mass_drift);
    agg.boundary_m = std::max(agg.boundary_m, r.boundary_m);
    agg.min_eta = std::min(agg.min_eta, r.min_eta);
    agg.c_dom = std::max(agg.c_dom, r.c_dom);
    agg.rho_touched = agg.rho_touched || r.rho_touched;
  }

  struct Check {
    const char* name;
    bool ok;
    double value;
  };
  const std::vector<Check> checks = {
      {"mass_drift", agg.mass_drift <= 1e-10, agg.mass_drift},
      {"max_w", agg.max_w <= C + 1e-6, agg.max_w},
      {"min_z", agg.min_z >= -C - 1e-6, agg.min_z},
      {"boundary_momentum", agg.boundary_m == 0.0, agg.boundary_m},
      {"stochastic_rho_untouched", !agg.rho_touched, agg.rho_touched ? 1.0 : 0.0},
      {"eta_star_nonnegative", agg.min_eta >= -1e-12, agg.min_eta},
      {"domination_finite", std::isfinite(agg.c_dom), agg.c_dom},
  };
  bool all_ok = true;
  json summary = {{"paths", paths}, {"envelope", C}};
  {
    auto out = open_out((fs::path(opt.out_dir) / "invariants.csv").string());
    out << "check,value,status\n";
    for (const auto& c : checks) {
      out << c.name << ',' << format_number(c.value) << ',' << (c.ok ? "ok" : "violated")
          << '\n';
      summary[c.name] = {{"value", c.value}, {"ok", c.ok}};
      all_ok = all_ok && c.ok;
      log << "invariants-check: " << c.name << " = " << format_number(c.value)
          << (c.ok ? " ok" : " VIOLATED") << '\n';
    }
  }
  const NoiseThresholdReport nt = noise_threshold_report(s.params, agg.c_dom);
  summary["noise_regime"] = nt.regime;
  man.summary = summary;
  man.write(opt.out_dir);
  return all_ok ? kExitOk : kExitViolation;
}

int run_command(const std::string& command, const CommandOptions& opt,
                std::ostream& log, std::ostream& err) {
  using Fn = int (*)(const RunConfig&, const CommandOptions&, std::ostream&);
  static const std::vector<std::pair<std::string, Fn>> table = {
      {"simulate", cmd_simulate},           {"ensemble", cmd_ensemble},
      {"decay-fit", cmd_decay_fit},         {"pme", cmd_pme},
      {"compare", cmd_compare},             {"entropy-check", cmd_entropy_check},
      {"invariants-check", cmd_invariants_check},
  };
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const auto& e) { return e.first == command; });
  if (it == table.end()) {
    err << "error: unknown command '" << command << "'\n";
    return kExitError;
  }
  try {
    RunConfig cfg = load_config(opt.config_path);
    if (opt.paths) cfg.paths = *opt.paths;
    if (opt.seed) cfg.seed = *opt.seed;
    return it->second(cfg, opt, log);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto& k : e.keys()) err << "  offending key: " << k << '\n';
    return kExitError;
  } catch (const NumericalBlowup& e) {
    err << "error: " << e.what() << " (cell " << e.cell() << ")\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace sel
