#include "sel/brownian.hpp"

#include <cmath>
#include <numbers>

#include "sel/errors.hpp"

namespace sel {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Uniform in (0, 1) from the top 53 bits.
double to_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

double quantize(double x) {
  return std::nearbyint(x / BrownianPath::kQuantum) * BrownianPath::kQuantum;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

double standard_normal(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t index) {
  const std::uint64_t key = mix64(seed ^ mix64(stream * kGolden + 1));
  const std::uint64_t c = 2 * index;
  const double u1 = to_unit(mix64(key + c * kGolden));
  const double u2 = to_unit(mix64(key + (c + 1) * kGolden));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t BrownianPath::index_of(double t) const {
  const double k = t / dt_;
  const double r = std::nearbyint(k);
  if (std::abs(k - r) > 1e-9 || r < 0.0)
    throw AlignmentError("time " + std::to_string(t) +
                         " is not on the Brownian path grid");
  return static_cast<std::size_t>(r);
}

BrownianPath sample_brownian(std::uint64_t seed, double dt, std::size_t count) {
  if (!(dt > 0.0)) throw ParameterError("Brownian step must be positive");
  std::vector<double> inc(count);
  const double scale = std::sqrt(dt);
  for (std::size_t k = 0; k < count; ++k)
    inc[k] = quantize(scale * standard_normal(seed, 0, k));
  return BrownianPath(seed, dt, 0, std::move(inc));
}

BrownianPath refine(const BrownianPath& path) {
  const int level = path.level() + 1;
  // Conditional on the coarse increment, the first half is normal with mean
  // dW / 2 and standard deviation sqrt(dt) / 2.
  const double half_sd = 0.5 * std::sqrt(path.dt());
  std::vector<double> fine(2 * path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double coarse = path[k];
    const double z = standard_normal(path.seed(), static_cast<std::uint64_t>(level), k);
    const double first = quantize(0.5 * coarse + half_sd * z);
    fine[2 * k] = first;
    fine[2 * k + 1] = coarse - first;  // exact: both on the quantum lattice
  }
  return BrownianPath(path.seed(), 0.5 * path.dt(), level, std::move(fine));
}

}  // namespace sel
