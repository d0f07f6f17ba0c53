#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sel/entropy.hpp"
#include "sel/field_state.hpp"
#include "sel/grid.hpp"
#include "sel/noise.hpp"
#include "sel/params.hpp"
#include "sel/splitting.hpp"

namespace sel {

/// (sum (rho - rho*)^2 dx, sum m^2 dx).
std::pair<double, double> l2_deviation(const FieldState& state, double rho_star,
                                       const Grid& grid);

/// Exponentially scaled variables w = e^{Mt}(rho - rho*), y = -int_0^x w,
/// z = e^{Mt} m. y is sampled at cell centres by the cumulative midpoint
/// sum; y_end is its value at x = 1.
struct TransformedState {
  double M_scale = 0.0;
  double t = 0.0;
  Field w;
  Field y;
  Field z;
  double y_end = 0.0;
};

TransformedState transform(const FieldState& state, double t, double M_scale,
                           double rho_star, const Grid& grid);

struct LongTimeConstants {
  double Lambda = 0.0;
  double rho_star = 0.0;
  double K = 0.0;
  double M_scale = 0.0;
  double A0 = 0.0;
  double alpha = 1.0;
};

/// K = max(Lambda + 2 rho*, 2 Lambda) / min(alpha, 1). Throws
/// ParameterError unless Lambda >= rho* > 0 and M_scale > 0.
LongTimeConstants make_longtime_constants(double Lambda, double rho_star,
                                          const ModelParams& params,
                                          double M_scale);

/// Coefficient of y^2 in Q: alpha / 2, or the printed 1 / 2 variant.
enum class QForm { HalfAlpha, Half };

/// Q(t) = sum [K e^{2Mt} eta* + y z + c y^2] dx.
double compute_Q(const FieldState& state, double t, const LongTimeConstants& c,
                 const ModelParams& params, const Grid& grid,
                 QForm form = QForm::HalfAlpha);

/// Largest per-cell ratio of (rho - rho*)^2 + m^2 (|rho - rho*|^gamma + m^2
/// for gamma > 2) to e^{-2Mt}(K e^{2Mt} eta* + y z + (alpha/2) y^2). Cells
/// with a vanishing numerator are skipped; a nonpositive denominator under a
/// positive numerator yields +inf.
double domination_ratio(const FieldState& state, const LongTimeConstants& c,
                        const ModelParams& params, const Grid& grid);

/// Per-path scalar series feeding the ensemble statistics.
struct PathSeries {
  std::vector<double> t;
  std::vector<double> dev;      // int (rho - rho*)^2 + m^2
  std::vector<double> eta_int;  // int eta*
};

PathSeries path_series(const Trajectory& traj, const ModelParams& params,
                       const Grid& grid);

struct MomentSeries {
  std::vector<double> t;
  std::vector<double> mean_dev, se_dev;
  std::vector<double> mean_eta, se_eta;
  std::vector<double> mean_eta_sq, se_eta_sq;
  std::size_t n_paths = 0;
};

/// Sample means and standard errors per record time. Values are sorted
/// before a pairwise sum, so the result does not depend on path order.
/// Throws PreconditionError for fewer than 2 paths and AlignmentError when
/// record times differ.
MomentSeries ensemble_moments(const std::vector<PathSeries>& paths);

/// Order-independent sum of values.
double stable_sum(std::vector<double> values);

struct DecayFit {
  double rate = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t points = 0;
};

/// Least squares of ln v against t over t_lo <= t <= t_hi: rate = -slope,
/// prefactor = exp(intercept). R^2 is 1 when ln v is constant. Throws
/// DomainError on a nonpositive value in the window and PreconditionError
/// with fewer than 2 points.
DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& v,
                   double t_lo, double t_hi);

struct NoiseThresholdReport {
  double A0 = 0.0;
  double min_alpha_1 = 0.0;
  double C_dom = 0.0;
  double C_tilde = 0.0;
  double threshold = 0.0;  // C_tilde * min(alpha, 1)
  std::string regime;      // "deterministic regime", "inside regime", "outside proven regime"
};

/// C_tilde = 1 / max(1, C_dom).
NoiseThresholdReport noise_threshold_report(const ModelParams& params,
                                            double C_dom);

/// Accumulates the Ito functional
///   S(t) = int_0^t int_0^1 (K e^{2Ms} m / rho + e^{Ms} y) sigma dx dW
/// along a splitting run and stores e^{-2Mt} S(t) at window ends.
class ItoFunctionalObserver : public SplitObserver {
 public:
  ItoFunctionalObserver(const LongTimeConstants& c, const ModelParams& params,
                        const Grid& grid, const NoiseSpec& noise);

  void stoch_substep(int n, double t, const FieldState& pre, double dW,
                     double dt) override;
  void window_end(int n, double t_next, const FieldState& U) override;

  std::vector<double> t;
  std::vector<double> scaled;  // e^{-2Mt} S(t)

 private:
  LongTimeConstants c_;
  const ModelParams& params_;
  const Grid& grid_;
  const NoiseSpec& noise_;
  double S_ = 0.0;
};

}  // namespace sel
