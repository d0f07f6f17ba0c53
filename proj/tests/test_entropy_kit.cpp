#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sel/entropy.hpp"
#include "sel/errors.hpp"
#include "sel/quadrature.hpp"

using namespace sel;

namespace {

// Gauss-Legendre nodes by Newton iteration on P_n, independent of the
// eigenvalue construction used by the library.
void legendre_newton(int n, std::vector<double>& z, std::vector<double>& w) {
  z.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    z[i] = x;
    w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

// Exact moment int_{-1}^{1} z^(2k) (1 - z^2)^lambda dz = B(k + 1/2, lambda + 1).
double even_moment(int k, double lambda) {
  return std::exp(std::lgamma(k + 0.5) + std::lgamma(lambda + 1.0) -
                  std::lgamma(k + lambda + 1.5));
}

struct StateSampler {
  std::mt19937_64 rng{2024};
  std::uniform_real_distribution<double> R{0.05, 2.0};
  std::uniform_real_distribution<double> V{-1.0, 1.0};
  std::pair<double, double> operator()() {
    const double rho = R(rng);
    return {rho, 2.0 * V(rng) * rho};
  }
};

bool close(double a, double b, double rel, double scale) {
  return std::abs(a - b) <= rel * std::max(std::abs(b), scale);
}

}  // namespace

TEST_SUITE("entropy_kit") {

TEST_CASE("Gegenbauer rule reproduces exact weighted moments") {
  for (double gamma : {1.4, 1.5, 2.0, 3.0}) {
    const double lambda = (3.0 - gamma) / (2.0 * (gamma - 1.0));
    const QuadratureRule r = gauss_gegenbauer(48, lambda);
    for (int k = 0; k < 40; ++k) {
      double q = 0.0;
      for (Eigen::Index j = 0; j < r.size(); ++j) q += r.weights[j] * std::pow(r.nodes[j], 2 * k);
      CHECK(q == doctest::Approx(even_moment(k, lambda)).epsilon(1e-12));
    }
    CHECK(r.weights.sum() / gegenbauer_weight_mass(lambda) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("lambda = 0 agrees with Newton Gauss-Legendre") {
  for (int n : {5, 16, 48}) {
    std::vector<double> z, w;
    legendre_newton(n, z, w);
    const QuadratureRule r = gauss_legendre(n);
    // Library nodes are ascending; Newton ones descending.
    for (int i = 0; i < n; ++i) {
      CHECK(r.nodes[i] == doctest::Approx(z[n - 1 - i]).epsilon(1e-13));
      CHECK(r.weights[i] == doctest::Approx(w[n - 1 - i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("normalisation of the kinetic weight") {
  for (double gamma : {1.4, 2.0, 3.0}) {
    const ModelParams p = make_params(gamma, 1.0, 0.0);
    const EntropyPair pair = make_entropy_pair("one", p);
    CHECK(pair.lambda == doctest::Approx((3.0 - gamma) / (2.0 * (gamma - 1.0))));
    CHECK(std::abs(pair.c_lambda * pair.rule.weights.sum() - 1.0) <= 1e-10);
  }
  const EntropyPair p3 = make_entropy_pair("one", make_params(3.0, 1.0, 0.0));
  CHECK(p3.lambda == 0.0);
  CHECK(p3.c_lambda == doctest::Approx(0.5));
}

TEST_CASE("closed forms of the kinetic family") {
  for (double gamma : {1.4, 2.0, 3.0}) {
    const ModelParams p = make_params(gamma, 1.0, 0.0);
    const EntropyPair one = make_entropy_pair("one", p);
    const EntropyPair xi = make_entropy_pair("xi", p);
    const EntropyPair en = make_entropy_pair("half_xi_sq", p);
    StateSampler sample;
    for (int k = 0; k < 1000; ++k) {
      const auto [rho, m] = sample();
      const double u = m / rho;
      const double scale = rho * std::pow(std::abs(u) + std::pow(rho, p.theta()), 3) + 1e-300;
      CHECK(close(eval_entropy(rho, m, one, p), rho, 1e-8, 0.0));
      CHECK(close(eval_entropy_flux(rho, m, one, p), m, 1e-8, 1e-12 * scale));
      CHECK(close(eval_entropy(rho, m, xi, p), m, 1e-8, 1e-12 * scale));
      CHECK(close(eval_entropy_flux(rho, m, xi, p), m * m / rho + pressure(rho, p), 1e-8, 0.0));
      const double eta_e = 0.5 * m * m / rho + p.kappa() * std::pow(rho, gamma) / (gamma - 1.0);
      CHECK(close(eval_entropy(rho, m, en, p), eta_e, 1e-8, 0.0));
      CHECK(close(mechanical_energy(rho, m, p), eta_e, 1e-13, 0.0));
      const double flux_e = u * (eta_e + pressure(rho, p));
      CHECK(close(eval_entropy_flux(rho, m, en, p), flux_e, 1e-8, 1e-12 * scale));
    }
    CHECK(std::abs(eval_entropy_flux(0.8, 0.0, en, p)) <= 1e-16);
  }
}

TEST_CASE("vacuum convention") {
  const ModelParams p = make_params(2.0, 1.0, 0.0);
  const EntropyPair en = make_entropy_pair("half_xi_sq", p);
  CHECK(eval_entropy(0.0, 0.0, en, p) == 0.0);
  CHECK(eval_entropy_flux(0.0, 0.0, en, p) == 0.0);
  CHECK_THROWS_AS(entropy_grad(0.0, 0.0, en, p), VacuumError);
  CHECK_THROWS_AS(entropy_dmm(1e-12, 0.0, en, p), VacuumError);
}

TEST_CASE("gradients: closed forms and finite differences") {
  for (double gamma : {1.4, 2.0, 3.0}) {
    const ModelParams p = make_params(gamma, 1.0, 0.0);
    const EntropyPair one = make_entropy_pair("one", p);
    const EntropyPair xi = make_entropy_pair("xi", p);
    const EntropyPair en = make_entropy_pair("half_xi_sq", p);
    const EntropyPair pw = make_entropy_pair("power:4", p);
    StateSampler sample;
    for (int k = 0; k < 300; ++k) {
      const auto [rho, m] = sample();
      const Eigen::Vector2d g1 = entropy_grad(rho, m, one, p);
      CHECK(g1[0] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(g1[1]) <= 1e-15);
      const Eigen::Vector2d gx = entropy_grad(rho, m, xi, p);
      CHECK(std::abs(gx[0]) <= 1e-12 * (1.0 + std::abs(m / rho)));
      CHECK(gx[1] == doctest::Approx(1.0).epsilon(1e-12));

      const Eigen::Vector2d ge = entropy_grad(rho, m, en, p);
      const double u = m / rho;
      CHECK(close(ge[1], u, 1e-8, 1e-12));
      const double drho = -0.5 * u * u + p.kappa() * gamma / (gamma - 1.0) * std::pow(rho, gamma - 1.0);
      CHECK(close(ge[0], drho, 1e-8, 1e-12));
      CHECK(close(entropy_dmm(rho, m, en, p), 1.0 / rho, 1e-10, 0.0));

      for (const EntropyPair* pr : {&en, &pw}) {
        const Eigen::Vector2d g = entropy_grad(rho, m, *pr, p);
        const double h = 1e-6;
        const double fr = (eval_entropy(rho + h, m, *pr, p) - eval_entropy(rho - h, m, *pr, p)) / (2 * h);
        const double fm = (eval_entropy(rho, m + h, *pr, p) - eval_entropy(rho, m - h, *pr, p)) / (2 * h);
        const double sc = std::abs(g[0]) + std::abs(g[1]);
        CHECK(close(g[0], fr, 1e-5, sc));
        CHECK(close(g[1], fm, 1e-5, sc));
        const double h2 = 1e-4;
        const double fmm = (eval_entropy(rho, m + h2, *pr, p) - 2.0 * eval_entropy(rho, m, *pr, p) +
                            eval_entropy(rho, m - h2, *pr, p)) / (h2 * h2);
        CHECK(close(entropy_dmm(rho, m, *pr, p), fmm, 1e-4, 1e-6));
      }
    }
  }
}

TEST_CASE("convexity along random directions") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> D(-1.0, 1.0);
  for (double gamma : {1.4, 2.0, 3.0}) {
    const ModelParams p = make_params(gamma, 1.0, 0.0);
    for (const char* name : {"one", "xi", "half_xi_sq", "power:2", "power:3", "power:4"}) {
      const EntropyPair pair = make_entropy_pair(name, p);
      StateSampler sample;
      for (int k = 0; k < 300; ++k) {
        const auto [rho, m] = sample();
        const double dr = 0.01 * D(rng) * rho, dm = 0.01 * D(rng);
        const double d2 = eval_entropy(rho + dr, m + dm, pair, p) - 2.0 * eval_entropy(rho, m, pair, p) +
                          eval_entropy(rho - dr, m - dm, pair, p);
        CHECK(d2 >= -1e-8);
      }
    }
  }
}

TEST_CASE("32 and 64 nodes agree for the polynomial generators") {
  for (double gamma : {1.4, 2.0, 3.0}) {
    const ModelParams p = make_params(gamma, 1.0, 0.0);
    for (const char* name : {"one", "xi", "half_xi_sq", "power:2", "power:4", "power:6"}) {
      const EntropyPair a = make_entropy_pair(name, p, 32);
      const EntropyPair b = make_entropy_pair(name, p, 64);
      StateSampler sample;
      for (int k = 0; k < 200; ++k) {
        const auto [rho, m] = sample();
        const double ea = eval_entropy(rho, m, a, p), eb = eval_entropy(rho, m, b, p);
        const double ha = eval_entropy_flux(rho, m, a, p), hb = eval_entropy_flux(rho, m, b, p);
        CHECK(std::abs(ea - eb) <= 1e-10 * std::max(1.0, std::abs(eb)));
        CHECK(std::abs(ha - hb) <= 1e-10 * std::max(1.0, std::abs(hb)));
      }
    }
  }
}

TEST_CASE("generator names") {
  CHECK(Generator::named("power:2.5").value(-2.0) == doctest::Approx(std::pow(2.0, 2.5) / 2.5));
  CHECK(Generator::named("power:3").first(-2.0) == doctest::Approx(-4.0));
  CHECK(Generator::named("power:3").second(-2.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(Generator::named("power:1.5"), ParameterError);
  CHECK_THROWS_AS(Generator::named("power:x"), ParameterError);
  CHECK_THROWS_AS(Generator::named("cosh"), ParameterError);
  const Generator c = Generator::custom(
      "cosh", [](double x) { return std::cosh(x); }, [](double x) { return std::sinh(x); },
      [](double x) { return std::cosh(x); });
  CHECK(c.second(0.0) == 1.0);
}

TEST_CASE("energy Hessian quadratic form") {
  const ModelParams p = make_params(2.0, 1.0, 0.0);
  CHECK(hessian_energy_quadratic(1.0, 0.0, 0.0, p) == 0.0);
  CHECK(hessian_energy_quadratic(1.0, 1.0, 0.0, p) == doctest::Approx(0.25));
  CHECK_THROWS(hessian_energy_quadratic(0.0, 1.0, 0.0, p));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> D(-1.0, 1.0);
  for (double gamma : {1.4, 2.0, 3.0}) {
    const ModelParams q = make_params(gamma, 1.0, 0.0);
    const EntropyPair en = make_entropy_pair("half_xi_sq", q);
    const EntropyPair pw = make_entropy_pair("power:4", q);
    StateSampler sample;
    for (int k = 0; k < 300; ++k) {
      const auto [rho, m] = sample();
      const double u = m / rho;
      const double rx = D(rng), ux = D(rng);
      const double mx = rho * ux + u * rx;  // (rho u)_x
      const double h = 1e-4;
      auto second_variation = [&](auto&& eta) {
        return (eta(rho + h * rx, m + h * mx) - 2.0 * eta(rho, m) + eta(rho - h * rx, m - h * mx)) /
               (h * h);
      };
      const double fd_e = second_variation([&](double r, double mm) { return mechanical_energy(r, mm, q); });
      const double qe = hessian_energy_quadratic(rho, rx, ux, q);
      CHECK(qe >= 0.0);
      CHECK(close(qe, fd_e, 1e-4, 1e-6));
      CHECK(close(entropy_hessian_form(rho, m, rx, ux, en, q), qe, 1e-9, 1e-12));
      const double fd_p =
          second_variation([&](double r, double mm) { return eval_entropy(r, mm, pw, q); });
      CHECK(close(entropy_hessian_form(rho, m, rx, ux, pw, q), fd_p, 1e-4, 1e-6));
    }
  }
}

TEST_CASE("relative entropy eta*") {
  const ModelParams p = make_params(2.0, 1.0, 0.0);
  const RelativeEntropyRef ref = make_relative_entropy_ref(0.5);
  CHECK(eval_eta_star(0.5, 0.0, ref, p) == 0.0);
  CHECK(eval_eta_star(1.0, 0.0, ref, p) == doctest::Approx(0.03125).epsilon(1e-15));
  CHECK_THROWS_AS(make_relative_entropy_ref(0.0), ParameterError);

  for (double gamma : {1.4, 2.0, 3.0}) {
    const ModelParams q = make_params(gamma, 1.0, 0.0, 0.0, 2.0, 1.0);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> R(0.0, 2.0), M(-2.0, 2.0), S(0.1, 2.0);
    for (int k = 0; k < 2000; ++k) {
      const RelativeEntropyRef r = make_relative_entropy_ref(S(rng));
      CHECK(eval_eta_star(R(rng), M(rng), r, q) >= 0.0);
    }
    CHECK(eval_eta_star(0.0, 0.0, make_relative_entropy_ref(1.0), q) >= 0.0);
  }
}

TEST_CASE("pressure-law inequalities") {
  const PressureTerms t = pressure_inequality_terms(0.7, 0.7, 1.0, 2.0);
  CHECK(t.diff_pow == 0.0);
  CHECK(t.monotone == 0.0);
  CHECK(t.bregman == 0.0);
  CHECK_THROWS_AS(pressure_inequality_terms(1.5, 0.2, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(pressure_inequality_terms(-0.1, 0.2, 1.0, 2.0), DomainError);

  const PressureInequalityReport r2 = check_pressure_inequalities(2.0, 2.0, 100);
  CHECK(r2.pass);
  CHECK(r2.monotone_ratio.max <= 1.0 + 1e-12);
  // For gamma = 2 the Bregman term is exactly (a - b)^2.
  CHECK(r2.lower_ratio.min == doctest::Approx(1.0));
  CHECK(r2.lower_ratio.max == doctest::Approx(1.0));

  const PressureInequalityReport r3 = check_pressure_inequalities(1.0, 3.0, 100);
  CHECK(r3.pass);
  CHECK(std::isfinite(r3.lower_ratio.max));
  CHECK(r3.lower_ratio.min > 0.0);

  const PressureInequalityReport r14 = check_pressure_inequalities(1.0, 1.4, 100);
  CHECK(r14.pass);
}

}  // TEST_SUITE
