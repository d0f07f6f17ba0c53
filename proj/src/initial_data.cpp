#include "sel/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sel/errors.hpp"

namespace sel {

namespace {

double gaussian_bump(double x, double center, double width) {
  const double s = (x - center) / width;
  return std::exp(-s * s);
}

// Mirror index into [0, n) for reflection across the cell faces at 0 and 1.
// Returns the source index and whether an odd number of reflections occurred.
std::pair<Eigen::Index, bool> reflect(Eigen::Index j, Eigen::Index n) {
  bool flipped = false;
  while (j < 0 || j >= n) {
    if (j < 0) {
      j = -1 - j;
    } else {
      j = 2 * n - 1 - j;
    }
    flipped = !flipped;
  }
  return {j, flipped};
}

}  // namespace

InitialProfile preset_profile(const std::string& name, const Grid& grid,
                              const PresetShape& shape) {
  const Eigen::Index n = grid.size();
  InitialProfile out{Field::Constant(n, shape.rho_base), Field::Zero(n)};
  const double b = shape.rho_base;
  const double a = shape.amplitude;
  if (name == "constant") return out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = grid.center(i);
    if (name == "bump") {
      out.rho0[i] = b * (1.0 + a * gaussian_bump(x, 0.3, 0.1));
    } else if (name == "two_bumps") {
      out.rho0[i] = b * (1.0 + a * gaussian_bump(x, 0.25, 0.08) +
                         0.5 * a * gaussian_bump(x, 0.7, 0.06));
    } else if (name == "vacuum_patch") {
      out.rho0[i] = (x > 0.4 && x < 0.6) ? 0.0 : b;
    } else {
      throw PreconditionError("unknown initial-data preset '" + name + "'");
    }
  }
  return out;
}

InitialProfile load_profile_csv(const std::string& path, const Grid& grid) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open initial-data CSV " + path);
  std::vector<double> xs, rs, ms;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, r, m;
    if (!(row >> x >> r >> m)) continue;  // header or malformed row
    xs.push_back(x);
    rs.push_back(r);
    ms.push_back(m);
  }
  if (xs.size() < 2) throw PreconditionError("initial-data CSV needs >= 2 rows");
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (!(xs[k] > xs[k - 1]))
      throw PreconditionError("initial-data CSV x column must increase");

  InitialProfile out{Field(grid.size()), Field(grid.size())};
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.center(i);
    auto hi = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t k = static_cast<std::size_t>(hi - xs.begin());
    if (k == 0) {
      out.rho0[i] = rs.front();
      out.m0[i] = ms.front();
    } else if (k == xs.size()) {
      out.rho0[i] = rs.back();
      out.m0[i] = ms.back();
    } else {
      const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
      out.rho0[i] = (1.0 - w) * rs[k - 1] + w * rs[k];
      out.m0[i] = (1.0 - w) * ms[k - 1] + w * ms[k];
    }
  }
  return out;
}

FieldState mollify_initial_data(const Field& rho0, const Field& m0,
                                const ModelParams& params, const Grid& grid) {
  const Eigen::Index n = grid.size();
  if (rho0.size() != n || m0.size() != n)
    throw PreconditionError("initial data size does not match the grid");
  const double tol = 1e-12;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(rho0[i] >= 0.0) || rho0[i] > params.M1() + tol)
      throw PreconditionError("initial density outside [0, M1] at cell " +
                              std::to_string(i));
    if (!(std::abs(m0[i]) <= params.M2() * rho0[i] + tol))
      throw PreconditionError("initial momentum exceeds M2 * rho0 at cell " +
                              std::to_string(i));
  }

  const double eps = params.epsilon();
  const Field rho_cut = rho0.max(eps);
  FieldState out{rho_cut, m0, 0.0};

  const double dx = grid.dx();
  const auto radius = static_cast<Eigen::Index>(std::ceil(4.0 * eps / dx));
  if (eps > 0.0 && radius > 0) {
    Field kernel(2 * radius + 1);
    for (Eigen::Index k = -radius; k <= radius; ++k) {
      const double s = static_cast<double>(k) * dx / eps;
      kernel[k + radius] = std::exp(-0.5 * s * s);
    }
    kernel /= kernel.sum();

    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, m = 0.0;
      for (Eigen::Index k = -radius; k <= radius; ++k) {
        const auto [j, flipped] = reflect(i + k, n);
        const double w = kernel[k + radius];
        r += w * rho_cut[j];
        m += w * (flipped ? -m0[j] : m0[j]);
      }
      out.rho[i] = std::min(r, params.M1());
      out.m[i] = m;
    }
  }
  out.m[0] = 0.0;
  out.m[n - 1] = 0.0;
  return out;
}

}  // namespace sel
