#pragma once

#include <cstdint>
#include <vector>

namespace sel {

/// splitmix64 finalizer (Steele, Lea, Flood 2014):
///   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
///   z ^= z >> 27; z *= 0x94D049BB133111EB;
///   z ^= z >> 31.
/// A bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based standard normal draw: a pure function of its arguments.
double standard_normal(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t index);

/// Increments of a scalar Wiener process on the uniform grid k * dt.
///
/// Increments are stored as integer multiples of kQuantum, so sums and
/// differences of a handful of them are exact in double precision. This is
/// what makes refine() sum-consistent bit for bit.
class BrownianPath {
 public:
  static constexpr double kQuantum = 0x1p-40;

  BrownianPath() = default;
  BrownianPath(std::uint64_t seed, double dt, int level,
               std::vector<double> increments)
      : seed_(seed), dt_(dt), level_(level), increments_(std::move(increments)) {}

  std::uint64_t seed() const { return seed_; }
  double dt() const { return dt_; }
  /// Number of halvings applied since sample_brownian().
  int level() const { return level_; }
  std::size_t size() const { return increments_.size(); }
  double duration() const { return dt_ * static_cast<double>(size()); }

  double operator[](std::size_t k) const { return increments_[k]; }
  const std::vector<double>& increments() const { return increments_; }

  /// Index k with k * dt == t, up to a relative tolerance of 1e-9 of dt.
  /// Throws AlignmentError when t is not on the path grid.
  std::size_t index_of(double t) const;

 private:
  std::uint64_t seed_ = 0;
  double dt_ = 0.0;
  int level_ = 0;
  std::vector<double> increments_;
};

/// count increments N(0, dt) from (seed, dt). Throws ParameterError on
/// dt <= 0.
BrownianPath sample_brownian(std::uint64_t seed, double dt, std::size_t count);

/// Halves dt by Brownian-bridge midpoint insertion. Consecutive pairs of the
/// result sum exactly to the corresponding coarse increment.
BrownianPath refine(const BrownianPath& path);

}  // namespace sel
