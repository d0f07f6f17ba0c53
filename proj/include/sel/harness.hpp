#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sel/brownian.hpp"
#include "sel/config.hpp"
#include "sel/det_solver.hpp"
#include "sel/longtime.hpp"
#include "sel/noise.hpp"
#include "sel/splitting.hpp"
#include "sel/stoch_solver.hpp"

namespace sel {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// mix64(base ^ ((index + 1) * 0x9E3779B97F4A7C15)).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// SEL_THREADS when set to a positive integer, else the hardware count.
int worker_count();

/// Calls fn(i) for i in [0, n) on `threads` workers. Exceptions are
/// rethrown on the caller, lowest index first.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

/// A validated configuration turned into solver inputs.
struct RunSetup {
  RunConfig cfg;
  ModelParams params;
  Grid grid;
  FieldState state0;
  NoiseSpec noise;
  SplitConfig split;
  DetSolverConfig det;
  StochStepConfig stoch;
  double path_dt = 0.0;
  std::size_t path_len = 0;

  double rho_star() const { return state0.mass(grid.dx()); }
  double m_scale() const { return cfg.m_scale > 0.0 ? cfg.m_scale : cfg.alpha; }
};

RunSetup make_setup(const RunConfig& cfg);

BrownianPath path_for(const RunSetup& setup, std::size_t index);

Trajectory run_path(const RunSetup& setup, std::size_t index,
                    SplitObserver* observer = nullptr);

/// Trajectories in path-index order.
std::vector<Trajectory> run_ensemble(const RunSetup& setup, std::size_t paths,
                                     int threads);

struct DecayReportRow {
  std::string quantity;
  DecayFit fit;
  std::size_t n_paths = 0;
};

/// Per-path decay summary over the configured fit window.
struct PathwiseDecay {
  std::vector<DecayFit> fits;
  std::vector<double> terminal_ratio;  // dev(T) / dev(0)
  std::size_t passing = 0;             // rate > 0 and ratio <= 1e-2
  double fraction = 0.0;
};

PathwiseDecay pathwise_decay(const std::vector<PathSeries>& series, double t_lo,
                             double t_hi);

// CSV and manifest writers. Numbers are printed with 17 significant digits.
std::string format_number(double x);
void write_series_csv(const std::string& file, const Trajectory& traj);
void write_mean_series_csv(const std::string& file,
                           const std::vector<Trajectory>& trajs);
void write_fields_csv(const std::string& dir, const Trajectory& traj,
                      const Grid& grid);
void write_moments_csv(const std::string& file, const MomentSeries& m);
void write_decay_report(const std::string& file,
                        const std::vector<DecayReportRow>& rows);

struct CommandOptions {
  std::string config_path;
  std::string out_dir = "sel_out";
  std::optional<long> paths;
  std::optional<std::uint64_t> seed;
  /// Worker count; worker_count() when unset.
  std::optional<int> threads;
};

/// Exit codes of the commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_ensemble(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_decay_fit(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_pme(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_compare(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_entropy_check(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_invariants_check(const RunConfig& cfg, const CommandOptions& opt,
                         std::ostream& log);

/// Loads and validates the config, applies --paths/--seed overrides and
/// dispatches. Errors are reported on `err` and mapped to exit codes.
int run_command(const std::string& command, const CommandOptions& opt,
                std::ostream& log, std::ostream& err);

}  // namespace sel
