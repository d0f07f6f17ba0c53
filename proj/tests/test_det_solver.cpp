#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "sel/det_solver.hpp"
#include "sel/entropy.hpp"
#include "sel/errors.hpp"
#include "sel/initial_data.hpp"

using namespace sel;

namespace {

constexpr double kPi = std::numbers::pi;

FieldState bump_state(const Grid& g, const ModelParams& p, double amp = 0.25) {
  const InitialProfile prof = preset_profile("bump", g, {1.0, amp});
  return mollify_initial_data(prof.rho0, prof.m0, p, g);
}

FieldState wavy_state(const Grid& g) {
  FieldState s{Field(g.size()), Field(g.size()), 0.0};
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double x = g.center(i);
    s.rho[i] = 1.0 + 0.3 * std::cos(kPi * x) + 0.1 * std::sin(4 * kPi * x);
    s.m[i] = 0.2 * std::sin(kPi * x) * s.rho[i];
  }
  s.m[0] = s.m[g.size() - 1] = 0.0;
  return s;
}

double l2_dev(const FieldState& s, double rho_star, double dx) {
  return std::sqrt((s.rho - rho_star).square().sum() * dx);
}

}  // namespace

TEST_SUITE("det_solver") {

TEST_CASE("constant equilibrium is a fixed point") {
  const ModelParams p = make_params(2.0, 1.0, 1e-3);
  const Grid g(200);
  const FieldState s{Field::Constant(200, 0.9), Field::Zero(200), 0.0};
  const FieldState out = det_step(s, stable_dt(s, p, g), p, g);
  CHECK((out.rho == s.rho).all());
  CHECK((out.m == s.m).all());
}

TEST_CASE("stable_dt bounds") {
  const ModelParams inviscid = make_params(2.0, 1.0, 0.0);
  const Grid g(100);
  const FieldState vac{Field::Zero(100), Field::Zero(100), 0.0};
  CHECK(stable_dt(vac, inviscid, g) == std::numeric_limits<double>::infinity());

  DetSolverConfig half;
  half.cfl = 0.5;
  const FieldState one{Field::Constant(100, 1.0), Field::Zero(100), 0.0};
  CHECK(stable_dt(one, inviscid, g, half) == doctest::Approx(0.01).epsilon(1e-14));

  const ModelParams viscous = make_params(2.0, 1.0, 1e-2);
  CHECK(stable_dt(one, viscous, g, half) == doctest::Approx(0.5 * 1e-4 / 2e-2).epsilon(1e-14));
  DetSolverConfig bad;
  bad.cfl = 0.95;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("heat equation oracle with m = 0") {
  const double eps = 1e-2;
  const ModelParams p = make_params(2.0, 1.0, eps);
  const Grid g(200);
  const double a[] = {0.3, 0.0, 0.1, 0.05};
  FieldState s{Field::Constant(200, 1.0), Field::Zero(200), 0.0};
  for (Eigen::Index i = 0; i < 200; ++i)
    for (int k = 1; k <= 4; ++k) s.rho[i] += a[k - 1] * std::cos(k * kPi * g.center(i));
  DetSolverConfig cfg;
  cfg.flux_scheme = FluxScheme::None;
  const FieldState out = apply_S(s, 1.0, p, g, cfg);
  double err = 0.0;
  for (Eigen::Index i = 0; i < 200; ++i) {
    double exact = 1.0;
    for (int k = 1; k <= 4; ++k)
      exact += a[k - 1] * std::exp(-eps * k * k * kPi * kPi) * std::cos(k * kPi * g.center(i));
    err = std::max(err, std::abs(out.rho[i] - exact));
  }
  CHECK(err <= 1e-4);
  CHECK(out.m.abs().maxCoeff() == 0.0);
  CHECK(out.t == 1.0);
}

TEST_CASE("mass is conserved step by step and over long runs") {
  const ModelParams p = make_params(2.0, 1.0, 1e-3);
  const Grid g(200);
  FieldState s = wavy_state(g);
  const double m0 = s.mass(g.dx());
  const double dt = stable_dt(s, p, g);
  const FieldState one = det_step(s, dt, p, g);
  CHECK(std::abs(one.mass(g.dx()) - m0) <= 1e-13);
  for (int k = 0; k < 10000; ++k) s = det_step(s, stable_dt(s, p, g), p, g);
  CHECK(std::abs(s.mass(g.dx()) - m0) <= 1e-10);
  CHECK(s.m[0] == 0.0);
  CHECK(s.m[199] == 0.0);
}

TEST_CASE("apply_S identity and semigroup property") {
  const ModelParams p = make_params(2.0, 1.0, 1e-3);
  const Grid g(100);
  const FieldState s = wavy_state(g);
  CHECK(apply_S(s, 0.0, p, g) == s);

  DetSolverConfig fixed;
  fixed.fixed_dt = 1e-3;
  const FieldState ab = apply_S(s, 0.05, p, g, fixed);
  const FieldState a_then_b = apply_S(apply_S(s, 0.02, p, g, fixed), 0.03, p, g, fixed);
  CHECK((ab.rho == a_then_b.rho).all());
  CHECK((ab.m == a_then_b.m).all());
  CHECK(ab.t == doctest::Approx(0.05));

  // A final partial step lands exactly on the requested time.
  const FieldState partial = apply_S(s, 0.0105, p, g, fixed);
  CHECK(partial.t == 0.0105);
  CHECK_THROWS_AS(apply_S(s, -1.0, p, g), PreconditionError);
}

TEST_CASE("density deviation decays for the smooth bump") {
  const ModelParams p = make_params(2.0, 1.0, 1e-3, 0.0, 2.0, 1.0);
  const Grid g(200);
  const FieldState s = bump_state(g, p);
  const double rs = s.mass(g.dx());
  const FieldState out = apply_S(s, 5.0, p, g);
  CHECK(l2_dev(out, rs, g.dx()) < l2_dev(s, rs, g.dx()));
}

TEST_CASE("Riemann invariants") {
  const ModelParams p2 = make_params(2.0, 1.0, 0.0);
  const ModelParams p3 = make_params(3.0, 1.0, 0.0);
  const FieldState s{(Field(3) << 1.0, 0.0, 4.0).finished(), (Field(3) << 0.0, 0.0, 4.0).finished(), 0.0};
  const RiemannInvariants r2 = compute_invariants(s, p2);
  CHECK(r2.w[0] == 1.0);
  CHECK(r2.z[0] == -1.0);
  CHECK(r2.w[1] == 0.0);
  CHECK(r2.z[1] == 0.0);
  CHECK(r2.w[2] == doctest::Approx(3.0));
  CHECK(r2.z[2] == doctest::Approx(-1.0));
  CHECK(r2.max_w == doctest::Approx(3.0));
  CHECK(r2.min_z == doctest::Approx(-1.0));
  const RiemannInvariants r3 = compute_invariants(s, p3);
  CHECK(r3.w[0] == 1.0);
  CHECK(r3.z[0] == -1.0);
}

TEST_CASE("invariant region and positivity") {
  for (double gamma : {1.4, 2.0, 3.0}) {
    const ModelParams p = make_params(gamma, 1.0, 1e-3, 0.0, 2.0, 1.0);
    const Grid g(200);
    FieldState s = wavy_state(g);
    const RiemannInvariants r0 = compute_invariants(s, p);
    const double C = std::max(r0.max_w, -r0.min_z);
    double max_w = r0.max_w, min_z = r0.min_z, min_rho = s.rho.minCoeff();
    for (int k = 0; k < 3000; ++k) {
      s = det_step(s, stable_dt(s, p, g), p, g);
      const RiemannInvariants r = compute_invariants(s, p);
      max_w = std::max(max_w, r.max_w);
      min_z = std::min(min_z, r.min_z);
      min_rho = std::min(min_rho, s.rho.minCoeff());
    }
    CHECK(max_w <= C + 1e-6);
    CHECK(min_z >= -C - 1e-6);
    CHECK(min_rho > 0.0);
  }
}

TEST_CASE("energy balance defect shrinks at first order") {
  // E(T) + eps int int Q + alpha int int m^2 / rho - E(0), left-point sums.
  auto defect = [](int n) {
    const ModelParams p = make_params(2.0, 1.0, 5e-3, 0.0, 2.0, 1.0);
    const Grid g(n);
    FieldState s = wavy_state(g);
    const double dx = g.dx();
    auto energy = [&](const FieldState& st) {
      double e = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) e += mechanical_energy(st.rho[i], st.m[i], p);
      return e * dx;
    };
    const double e0 = energy(s);
    double diss = 0.0;
    const double T = 0.5;
    const double dt = T / std::ceil(T / stable_dt(s, p, g));
    for (double t = 0.0; t < T - 0.5 * dt; t += dt) {
      double rate = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double rho = s.rho[i];
        rate += p.alpha() * s.m[i] * s.m[i] / rho;
        if (i > 0 && i < n - 1) {
          const double rx = (s.rho[i + 1] - s.rho[i - 1]) / (2 * dx);
          const double ux = (s.m[i + 1] / s.rho[i + 1] - s.m[i - 1] / s.rho[i - 1]) / (2 * dx);
          rate += p.epsilon() * hessian_energy_quadratic(rho, rx, ux, p);
        }
      }
      diss += rate * dx * dt;
      s = det_step(s, dt, p, g);
    }
    return std::abs(energy(s) + diss - e0);
  };
  const double d1 = defect(50), d2 = defect(100), d3 = defect(200);
  CHECK(d2 < d1);
  CHECK(d3 < d2);
  CHECK(d1 / d2 > 1.5);
  CHECK(d2 / d3 > 1.5);
}

TEST_CASE("numerical blowup and precondition errors") {
  const ModelParams p = make_params(2.0, 1.0, 1e-3);
  const Grid g(50);
  FieldState s{Field::Constant(50, 1.0), Field::Zero(50), 0.0};
  s.rho[17] = std::numeric_limits<double>::quiet_NaN();
  try {
    det_step(s, 1e-4, p, g);
    FAIL("expected NumericalBlowup");
  } catch (const NumericalBlowup& e) {
    CHECK(e.cell() == 17);
  }
  const FieldState ok{Field::Constant(50, 1.0), Field::Zero(50), 0.0};
  CHECK_THROWS_AS(det_step(ok, 1.0, p, g), PreconditionError);
  CHECK(parse_flux_scheme("none") == FluxScheme::None);
  CHECK_THROWS_AS(parse_flux_scheme("weno"), ParameterError);
}

}  // TEST_SUITE
