#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace sel {

/// Everything a CLI run needs, as parsed from a key=value file.
struct RunConfig {
  // model
  double gamma = 2.0;
  double alpha = 1.0;
  double epsilon = 1e-3;
  double a0 = 0.01;
  double m1 = 2.0;
  double m2 = 1.0;
  double rho_floor = 1e-10;
  // grid and initial data
  long n_cells = 200;
  std::string preset = "bump";
  std::string init_csv;
  double rho_base = 1.0;
  double amplitude = 0.25;
  // splitting
  double t_final = 20.0;
  long n_windows = 1000;
  long record_every = 10;
  std::string mode = "endpoint";
  bool clamp = true;
  long substeps = 4;
  double cfl = 0.25;
  // ensemble
  long paths = 64;
  std::uint64_t seed = 1;
  // diagnostics
  std::string entropy = "half_xi_sq";
  long quad_nodes = 48;
  double m_scale = 0.0;  // 0 selects alpha
  double fit_lo = 2.0;
  double fit_hi = 20.0;

  /// Echo of the keys as given (after defaults), for the manifest.
  std::map<std::string, std::string> echo() const;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys and
/// unparsable values are all collected into one ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Cross-module checks (parameter ranges, preset and mode names, entropy
/// generator, window/record alignment). Throws ConfigError listing every
/// offending key.
void validate_config(const RunConfig& cfg);

}  // namespace sel
