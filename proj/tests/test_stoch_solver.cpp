#include <doctest.h>

#include <cmath>

#include "sel/errors.hpp"
#include "sel/stoch_solver.hpp"

using namespace sel;

namespace {

FieldState sample_state(const Grid& g) {
  FieldState s{Field(g.size()), Field(g.size()), 0.0};
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double x = g.center(i);
    s.rho[i] = 0.8 + 0.3 * std::sin(3.0 * x);
    s.m[i] = 0.4 * std::sin(6.0 * x) * s.rho[i];
  }
  s.m[0] = s.m[g.size() - 1] = 0.0;
  return s;
}

}  // namespace

TEST_SUITE("stoch_solver") {

TEST_CASE("zero noise is the identity") {
  const Grid g(40);
  const FieldState s = sample_state(g);
  const NoiseSpec zero = make_noise_spec(0.0, 2.0, 1.0);
  CHECK(stoch_substep(s, 0.3, zero, g) == s);
}

TEST_CASE("density is never modified") {
  const Grid g(40);
  const FieldState s = sample_state(g);
  const NoiseSpec ns = make_noise_spec(0.25, 2.0, 1.0);
  const FieldState out = stoch_substep(s, 0.7, ns, g);
  CHECK((out.rho == s.rho).all());
  CHECK((out.m != s.m).any());
  CHECK(out.m[0] == 0.0);
  CHECK(out.m[39] == 0.0);
}

TEST_CASE("states outside the support are left alone") {
  const Grid g(40);
  FieldState s = sample_state(g);
  s.rho += 5.0;  // beyond M1 = 2 everywhere
  const NoiseSpec ns = make_noise_spec(0.25, 2.0, 1.0);
  StochStepConfig cfg;
  cfg.envelope = 3.0;
  ClampLog log;
  const FieldState out = stoch_substep(s, 2.0, ns, g, cfg, &log);
  CHECK(out == s);
  CHECK(log.count == 0);
}

TEST_CASE("apply_R bookkeeping: identity, causality, alignment, exhaustion") {
  const Grid g(30);
  const FieldState s = sample_state(g);
  const NoiseSpec ns = make_noise_spec(0.04, 2.0, 1.0);
  const BrownianPath path = sample_brownian(5, 0.01, 100);
  const FieldState same = apply_R(s, 0.3, 0.3, path, ns, g);
  CHECK((same.rho == s.rho).all());
  CHECK((same.m == s.m).all());

  // Only increments before t matter.
  std::vector<double> head(path.increments().begin(), path.increments().begin() + 50);
  const BrownianPath truncated(path.seed(), path.dt(), 0, head);
  const FieldState full = apply_R(s, 0.0, 0.5, path, ns, g);
  const FieldState cut = apply_R(s, 0.0, 0.5, truncated, ns, g);
  CHECK((full.m == cut.m).all());
  CHECK(full.m[0] == 0.0);
  CHECK(full.m[29] == 0.0);

  CHECK_THROWS_AS(apply_R(s, 0.0, 0.505, path, ns, g), AlignmentError);
  CHECK_THROWS_AS(apply_R(s, 0.0, 1.5, path, ns, g), PathExhausted);
  CHECK_THROWS_AS(apply_R(s, 0.5, 0.2, path, ns, g), PreconditionError);
}

TEST_CASE("martingale mean and Ito isometry over an ensemble") {
  const Grid g(16);
  const FieldState s = sample_state(g);
  const double A0 = 0.25, M1 = 2.0, M2 = 1.0;
  const NoiseSpec ns = make_noise_spec(A0, M1, M2);
  StochStepConfig cfg;
  cfg.clamp = false;
  const double h = 0.01;
  const int substeps = 4;
  const int paths = 10000;
  Field sum = Field::Zero(16), sq = Field::Zero(16);
  for (int p = 0; p < paths; ++p) {
    const BrownianPath path = sample_brownian(1000 + p, h / substeps, substeps);
    const FieldState out = apply_R(s, 0.0, h, path, ns, g, cfg);
    const Field d = out.m - s.m;
    sum += d;
    sq += d.square();
  }
  const Field mean = sum / paths;
  const Field var = sq / paths - mean.square();
  const double bound = 5.0 * std::sqrt(A0 * M1 * M1 * M2 * M2 * h / paths);
  for (Eigen::Index i = 1; i + 1 < 16; ++i) {
    CHECK(std::abs(mean[i]) <= bound);
    const double sig = default_sigma(g.center(i), s.rho[i], s.m[i], ns);
    if (sig == 0.0) continue;
    CHECK(var[i] == doctest::Approx(sig * sig * h).epsilon(0.10));
  }
}

TEST_CASE("clamp keeps cells inside the box and the invariant region") {
  const Grid g(40);
  const NoiseSpec ns = make_noise_spec(1.0, 2.0, 1.0);
  FieldState s = sample_state(g);
  StochStepConfig cfg;
  cfg.theta = 0.5;
  cfg.envelope = 1.6;
  ClampLog log;
  const BrownianPath path = sample_brownian(77, 0.5, 200);
  for (std::size_t k = 0; k < path.size(); ++k) {
    const FieldState next = stoch_substep(s, 25.0 * path[k], ns, g, cfg, &log);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (!ns.in_support_box(s.rho[i], s.m[i])) {
        CHECK(next.m[i] == s.m[i]);
        continue;
      }
      CHECK(std::abs(next.m[i]) <= ns.m_max);
      const double u = next.m[i] / next.rho[i];
      const double r = std::sqrt(next.rho[i]);
      CHECK(u + r <= cfg.envelope + 1e-12);
      CHECK(u - r >= -cfg.envelope - 1e-12);
    }
    s = next;
  }
  CHECK(log.count > 0);
  CHECK(log.total > 0.0);

  StochStepConfig bad;
  bad.substeps_per_interval = 0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

}  // TEST_SUITE
