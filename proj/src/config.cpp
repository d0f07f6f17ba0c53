#include "sel/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "sel/entropy.hpp"
#include "sel/errors.hpp"
#include "sel/params.hpp"

namespace sel {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool to_double(const std::string& v, double& out) {
  std::istringstream in(v);
  in >> out;
  return in && in.eof() && std::isfinite(out);
}

template <typename Int>
bool to_int(const std::string& v, Int& out) {
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// Shortest representation that parses back to x.
std::string fmt_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

using Setter = std::function<bool(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  auto dbl = [](double RunConfig::*f) {
    return Setter([f](RunConfig& c, const std::string& v) { return to_double(v, c.*f); });
  };
  auto lng = [](long RunConfig::*f) {
    return Setter([f](RunConfig& c, const std::string& v) { return to_int(v, c.*f); });
  };
  auto str = [](std::string RunConfig::*f) {
    return Setter([f](RunConfig& c, const std::string& v) {
      c.*f = v;
      return !v.empty();
    });
  };
  static const std::map<std::string, Setter> table = {
      {"gamma", dbl(&RunConfig::gamma)},
      {"alpha", dbl(&RunConfig::alpha)},
      {"epsilon", dbl(&RunConfig::epsilon)},
      {"a0", dbl(&RunConfig::a0)},
      {"m1", dbl(&RunConfig::m1)},
      {"m2", dbl(&RunConfig::m2)},
      {"rho_floor", dbl(&RunConfig::rho_floor)},
      {"n_cells", lng(&RunConfig::n_cells)},
      {"preset", str(&RunConfig::preset)},
      {"init_csv", str(&RunConfig::init_csv)},
      {"rho_base", dbl(&RunConfig::rho_base)},
      {"amplitude", dbl(&RunConfig::amplitude)},
      {"t_final", dbl(&RunConfig::t_final)},
      {"n_windows", lng(&RunConfig::n_windows)},
      {"record_every", lng(&RunConfig::record_every)},
      {"mode", str(&RunConfig::mode)},
      {"clamp",
       [](RunConfig& c, const std::string& v) {
         if (v == "on") c.clamp = true;
         else if (v == "off") c.clamp = false;
         else return false;
         return true;
       }},
      {"substeps", lng(&RunConfig::substeps)},
      {"cfl", dbl(&RunConfig::cfl)},
      {"paths", lng(&RunConfig::paths)},
      {"seed", [](RunConfig& c, const std::string& v) { return to_int(v, c.seed); }},
      {"entropy", str(&RunConfig::entropy)},
      {"quad_nodes", lng(&RunConfig::quad_nodes)},
      {"m_scale", dbl(&RunConfig::m_scale)},
      {"fit_lo", dbl(&RunConfig::fit_lo)},
      {"fit_hi", dbl(&RunConfig::fit_hi)},
  };
  return table;
}

std::string join(const std::vector<std::string>& keys) {
  std::string s;
  for (const auto& k : keys) s += (s.empty() ? "" : ", ") + k;
  return s;
}

}  // namespace

std::map<std::string, std::string> RunConfig::echo() const {
  return {
      {"gamma", fmt_double(gamma)},       {"alpha", fmt_double(alpha)},
      {"epsilon", fmt_double(epsilon)},   {"a0", fmt_double(a0)},
      {"m1", fmt_double(m1)},             {"m2", fmt_double(m2)},
      {"rho_floor", fmt_double(rho_floor)},
      {"n_cells", std::to_string(n_cells)},
      {"preset", preset},                 {"init_csv", init_csv},
      {"rho_base", fmt_double(rho_base)}, {"amplitude", fmt_double(amplitude)},
      {"t_final", fmt_double(t_final)},   {"n_windows", std::to_string(n_windows)},
      {"record_every", std::to_string(record_every)},
      {"mode", mode},                     {"clamp", clamp ? "on" : "off"},
      {"substeps", std::to_string(substeps)},
      {"cfl", fmt_double(cfl)},           {"paths", std::to_string(paths)},
      {"seed", std::to_string(seed)},     {"entropy", entropy},
      {"quad_nodes", std::to_string(quad_nodes)},
      {"m_scale", fmt_double(m_scale)},   {"fit_lo", fmt_double(fit_lo)},
      {"fit_hi", fmt_double(fit_hi)},
  };
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::vector<std::string> bad, keys;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad.push_back("line " + std::to_string(lineno) + " (missing '=')");
      keys.push_back("line " + std::to_string(lineno));
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      bad.push_back(key + " (unknown key)");
      keys.push_back(key);
    } else if (!it->second(cfg, value)) {
      bad.push_back(key + " (invalid value '" + value + "')");
      keys.push_back(key);
    }
  }
  if (!bad.empty()) throw ConfigError("invalid configuration: " + join(bad), keys);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path, {"--config"});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const RunConfig& c) {
  std::vector<std::string> bad, keys;
  auto need = [&](bool ok, const std::string& key, const std::string& why) {
    if (ok) return;
    bad.push_back(key + " (" + why + ")");
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  };
  need(c.gamma > 1.0, "gamma", "must exceed 1");
  need(c.alpha > 0.0, "alpha", "must be positive");
  need(c.epsilon >= 0.0, "epsilon", "must be nonnegative");
  need(c.a0 >= 0.0, "a0", "must be nonnegative");
  need(c.m1 > 0.0, "m1", "must be positive");
  need(c.m2 > 0.0, "m2", "must be positive");
  need(c.rho_floor > 0.0, "rho_floor", "must be positive");
  need(c.n_cells >= 5, "n_cells", "must be at least 5");
  need(c.init_csv.empty() || c.preset == "bump" || c.preset == "csv", "preset",
       "conflicts with init_csv");
  need(c.preset == "constant" || c.preset == "bump" || c.preset == "two_bumps" ||
           c.preset == "vacuum_patch" || c.preset == "csv",
       "preset", "unknown preset");
  need(c.preset != "csv" || !c.init_csv.empty(), "init_csv", "required for preset=csv");
  need(c.rho_base >= 0.0 && c.rho_base * (1.0 + std::max(c.amplitude, 0.0)) <= c.m1,
       "rho_base", "preset density must lie in [0, m1]");
  need(c.amplitude >= 0.0, "amplitude", "must be nonnegative");
  need(c.t_final > 0.0, "t_final", "must be positive");
  need(c.n_windows >= 1, "n_windows", "must be at least 1");
  need(c.record_every >= 1, "record_every", "must be at least 1");
  need(c.mode == "endpoint" || c.mode == "interpolated", "mode",
       "must be endpoint or interpolated");
  need(c.substeps >= 1, "substeps", "must be at least 1");
  need(c.cfl > 0.0 && c.cfl <= 0.9, "cfl", "must lie in (0, 0.9]");
  need(c.paths >= 1, "paths", "must be at least 1");
  need(c.quad_nodes >= 2 && c.quad_nodes <= 512, "quad_nodes", "must lie in [2, 512]");
  need(c.m_scale >= 0.0, "m_scale", "must be nonnegative");
  need(c.fit_lo < c.fit_hi, "fit_lo", "must be below fit_hi");
  try {
    Generator::named(c.entropy);
  } catch (const ParameterError&) {
    bad.push_back("entropy (unknown generator '" + c.entropy + "')");
    keys.push_back("entropy");
  }
  if (!bad.empty()) throw ConfigError("invalid configuration: " + join(bad), keys);
}

}  // namespace sel
