#include "sel/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sel/errors.hpp"

namespace sel {

Generator Generator::named(const std::string& name) {
  Generator g;
  g.name_ = name;
  if (name == "one") {
    g.kind_ = Kind::One;
  } else if (name == "xi") {
    g.kind_ = Kind::Xi;
  } else if (name == "half_xi_sq") {
    g.kind_ = Kind::HalfXiSq;
  } else if (name.rfind("power:", 0) == 0) {
    g.kind_ = Kind::Power;
    std::size_t used = 0;
    const std::string arg = name.substr(6);
    try {
      g.p_ = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size() || !(g.p_ >= 2.0) || !std::isfinite(g.p_))
      throw ParameterError("power generator needs p >= 2, got '" + arg + "'");
  } else {
    throw ParameterError("unknown entropy generator '" + name + "'");
  }
  return g;
}

Generator Generator::custom(std::string name, std::function<double(double)> g,
                            std::function<double(double)> dg,
                            std::function<double(double)> d2g) {
  if (!g || !dg || !d2g) throw ParameterError("custom generator needs g, g', g''");
  Generator out;
  out.name_ = std::move(name);
  out.kind_ = Kind::Custom;
  out.g_ = std::move(g);
  out.dg_ = std::move(dg);
  out.d2g_ = std::move(d2g);
  return out;
}

double Generator::value(double xi) const {
  switch (kind_) {
    case Kind::One: return 1.0;
    case Kind::Xi: return xi;
    case Kind::HalfXiSq: return 0.5 * xi * xi;
    case Kind::Power: return detail::power(std::abs(xi), p_) / p_;
    case Kind::Custom: return g_(xi);
  }
  return 0.0;
}

double Generator::first(double xi) const {
  switch (kind_) {
    case Kind::One: return 0.0;
    case Kind::Xi: return 1.0;
    case Kind::HalfXiSq: return xi;
    case Kind::Power: return std::copysign(detail::power(std::abs(xi), p_ - 1.0), xi);
    case Kind::Custom: return dg_(xi);
  }
  return 0.0;
}

double Generator::second(double xi) const {
  switch (kind_) {
    case Kind::One:
    case Kind::Xi: return 0.0;
    case Kind::HalfXiSq: return 1.0;
    case Kind::Power: return (p_ - 1.0) * detail::power(std::abs(xi), p_ - 2.0);
    case Kind::Custom: return d2g_(xi);
  }
  return 0.0;
}

EntropyPair make_entropy_pair(const Generator& g, const ModelParams& params,
                              int nodes) {
  EntropyPair pair{g, 0.0, 0.0, {}};
  const double gamma = params.gamma();
  pair.lambda = (3.0 - gamma) / (2.0 * (gamma - 1.0));
  pair.rule = gauss_gegenbauer(nodes, pair.lambda);
  pair.c_lambda = 1.0 / gegenbauer_weight_mass(pair.lambda);
  return pair;
}

EntropyPair make_entropy_pair(const std::string& name, const ModelParams& params,
                              int nodes) {
  return make_entropy_pair(Generator::named(name), params, nodes);
}

namespace {

template <typename F>
double node_sum(const EntropyPair& pair, F&& f) {
  const auto& z = pair.rule.nodes;
  const auto& w = pair.rule.weights;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < z.size(); ++k) acc += w[k] * f(z[k]);
  return acc;
}

void require_nonvacuum(double rho, const ModelParams& params) {
  if (!(rho > params.rho_floor()))
    throw VacuumError("entropy derivative requested at a vacuum state");
}

}  // namespace

double eval_entropy(double rho, double m, const EntropyPair& pair,
                    const ModelParams& params) {
  if (rho <= 0.0) return 0.0;
  const double u = m / std::max(rho, params.rho_floor());
  const double s = params.rho_pow_theta(rho);
  return pair.c_lambda * rho *
         node_sum(pair, [&](double z) { return pair.g.value(u + z * s); });
}

double eval_entropy_flux(double rho, double m, const EntropyPair& pair,
                         const ModelParams& params) {
  if (rho <= 0.0) return 0.0;
  const double u = m / std::max(rho, params.rho_floor());
  const double s = params.rho_pow_theta(rho);
  const double ts = params.theta() * s;
  return pair.c_lambda * rho * node_sum(pair, [&](double z) {
           return pair.g.value(u + z * s) * (u + z * ts);
         });
}

Eigen::Vector2d entropy_grad(double rho, double m, const EntropyPair& pair,
                             const ModelParams& params) {
  require_nonvacuum(rho, params);
  const double u = m / rho;
  const double s = params.rho_pow_theta(rho);
  const double ts = params.theta() * s;
  double d_rho = 0.0;
  double d_m = 0.0;
  const auto& z = pair.rule.nodes;
  const auto& w = pair.rule.weights;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const double v = u + z[k] * s;
    const double gp = pair.g.first(v);
    d_rho += w[k] * (pair.g.value(v) + (z[k] * ts - u) * gp);
    d_m += w[k] * gp;
  }
  return {pair.c_lambda * d_rho, pair.c_lambda * d_m};
}

double entropy_dmm(double rho, double m, const EntropyPair& pair,
                   const ModelParams& params) {
  require_nonvacuum(rho, params);
  const double u = m / rho;
  const double s = params.rho_pow_theta(rho);
  return pair.c_lambda / rho *
         node_sum(pair, [&](double z) { return pair.g.second(u + z * s); });
}

double entropy_hessian_form(double rho, double m, double drho_dx, double du_dx,
                            const EntropyPair& pair, const ModelParams& params) {
  require_nonvacuum(rho, params);
  const double theta = params.theta();
  const double u = m / rho;
  const double s = params.rho_pow_theta(rho);
  const double ds = theta * s / rho * drho_dx;  // d/dx rho^theta
  const double curv = theta * (theta + 1.0) * s / rho * drho_dx * drho_dx;
  return pair.c_lambda * node_sum(pair, [&](double z) {
           const double v = u + z * s;
           const double vx = du_dx + z * ds;
           return rho * pair.g.second(v) * vx * vx + z * pair.g.first(v) * curv;
         });
}

Field entropy_field(const FieldState& st, const EntropyPair& pair,
                    const ModelParams& params) {
  Field out(st.size());
  for (Eigen::Index i = 0; i < st.size(); ++i)
    out[i] = eval_entropy(st.rho[i], st.m[i], pair, params);
  return out;
}

Field entropy_flux_field(const FieldState& st, const EntropyPair& pair,
                         const ModelParams& params) {
  Field out(st.size());
  for (Eigen::Index i = 0; i < st.size(); ++i)
    out[i] = eval_entropy_flux(st.rho[i], st.m[i], pair, params);
  return out;
}

double mechanical_energy(double rho, double m, const ModelParams& params) {
  if (rho <= 0.0) return 0.0;
  return 0.5 * m * m / std::max(rho, params.rho_floor()) +
         pressure_unchecked(rho, params) / (params.gamma() - 1.0);
}

double mechanical_energy_flux(double rho, double m, const ModelParams& params) {
  if (rho <= 0.0) return 0.0;
  const double u = m / std::max(rho, params.rho_floor());
  return u * (mechanical_energy(rho, m, params) + pressure_unchecked(rho, params));
}

double hessian_energy_quadratic(double rho, double drho_dx, double du_dx,
                                const ModelParams& params) {
  if (!(rho > 0.0)) throw DomainError("hessian_energy_quadratic needs rho > 0");
  return params.kappa() * params.gamma() *
             detail::power(rho, params.gamma() - 2.0) * drho_dx * drho_dx +
         rho * du_dx * du_dx;
}

RelativeEntropyRef make_relative_entropy_ref(double rho_star) {
  if (!(rho_star > 0.0) || !std::isfinite(rho_star))
    throw ParameterError("reference density must be positive");
  return RelativeEntropyRef{rho_star};
}

double eval_eta_star(double rho, double m, const RelativeEntropyRef& ref,
                     const ModelParams& params) {
  const double rs = ref.rho_star;
  return 0.5 * m * m / std::max(rho, params.rho_floor()) +
         pressure_unchecked(rho, params) - pressure_unchecked(rs, params) -
         pressure_prime(rs, params) * (rho - rs);
}

PressureTerms pressure_inequality_terms(double a, double b, double M,
                                        double gamma) {
  if (!(a >= 0.0 && a <= M && b >= 0.0 && b <= M))
    throw DomainError("pressure inequality arguments must lie in [0, M]");
  const double d = a - b;
  const double ad = std::abs(d);
  const double pa = std::pow(a, gamma);
  const double pb = std::pow(b, gamma);
  const double dpb = gamma * std::pow(b, gamma - 1.0);
  PressureTerms t;
  t.diff_pow = std::pow(ad, gamma + 1.0);
  t.monotone = d * (pa - pb);
  t.bregman = pa - pb - dpb * d;
  t.lower_power = gamma <= 2.0 ? ad * ad : std::pow(ad, gamma);
  t.abs_diff = ad;
  return t;
}

bool RatioRange::bounded() const {
  return std::isfinite(min) && std::isfinite(max) && min > 0.0;
}

PressureInequalityReport check_pressure_inequalities(double M, double gamma,
                                                     int samples) {
  if (!(M > 0.0)) throw DomainError("M must be positive");
  if (!(gamma > 1.0)) throw ParameterError("gamma must exceed 1");
  if (samples < 2) throw ParameterError("need at least 2 samples per axis");

  constexpr double inf = std::numeric_limits<double>::infinity();
  PressureInequalityReport r;
  r.samples = samples;
  for (RatioRange* q : {&r.monotone_ratio, &r.lower_ratio, &r.upper_ratio,
                        &r.bregman_ratio}) {
    q->min = inf;
    q->max = -inf;
  }
  auto update = [](RatioRange& q, double v) {
    if (std::isnan(v)) {
      q.min = q.max = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    q.min = std::min(q.min, v);
    q.max = std::max(q.max, v);
  };

  const double h = M / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    const double a = i == samples - 1 ? M : i * h;
    for (int j = 0; j < samples; ++j) {
      if (i == j) continue;
      const double b = j == samples - 1 ? M : j * h;
      const PressureTerms t = pressure_inequality_terms(a, b, M, gamma);
      update(r.monotone_ratio, t.diff_pow / t.monotone);
      update(r.lower_ratio, t.bregman / t.lower_power);
      update(r.upper_ratio, t.bregman / t.abs_diff);
      update(r.bregman_ratio, t.bregman / t.monotone);
    }
  }
  r.pass = r.monotone_ratio.bounded() && r.lower_ratio.bounded() &&
           r.upper_ratio.bounded() && r.bregman_ratio.bounded();
  return r;
}

}  // namespace sel
