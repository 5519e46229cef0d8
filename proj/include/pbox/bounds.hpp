#pragma once

#include <optional>

#include "pbox/moments.hpp"
#include "pbox/optimize.hpp"

namespace pbox {

/// Tolerance used for every "lhs >= bound" decision.
inline constexpr double kBoundSlack = 1e-9;

struct BoundResult {
  BoundKind kind = BoundKind::none;
  double value = 0.0;              ///< lower bound (action)
  std::optional<double> witness;   ///< cut x, x0, t*, or none
  double lhs_product = 0.0;        ///< the uncertainty product the bound constrains
  bool satisfied = false;          ///< lhs_product >= value - kBoundSlack
  bool degenerate = false;         ///< several equivalent witnesses; the smallest is reported
};

struct DensityMinimum {
  double x0 = 0.0;         ///< argmin of the circle density, smallest on ties
  double density = 0.0;    ///< rho(x0)
  double scaled = 0.0;     ///< L * rho(x0)
  bool degenerate = false;
};

/// Minimum of the circle density over one period at time t: uniform scan plus
/// golden-section refinement with a derivative polish. Bloch-sine states have
/// an exact zero at the moving node, which is returned directly.
DensityMinimum density_minimum(const State& s, double t, const Constants& c, const CircleSearchOptions& opt = {});

/// Local minimum of the circle density within [near - half_width, near + half_width].
double track_density_minimum(const State& s, double t, double near, double half_width, const Constants& c);

/// (hbar/2) |1 - L rho(cut_x, t)| with the uncertainty product on [cut_x, cut_x + L].
BoundResult cut_bound(const State& s, double t, double cut_x, const Constants& c, const QuadratureConfig& quad = {});

/// (hbar/2) (1 - L min_x rho(x, t)) with the product on [x0, x0 + L].
BoundResult min_density_cut(const State& s, double t, const Constants& c, const QuadratureConfig& quad = {});

struct MaxminOptions {
  int time_samples = 2048;
  CircleSearchOptions search{};
  QuadratureConfig quadrature{};
};

/// (hbar/2) (1 - L max_t min_x rho) with t scanned over one recurrence period
/// and refined by golden section. The witness is t*; lhs is the min-cut
/// product at t*.
BoundResult maxmin_bound(const State& s, const Constants& c, const MaxminOptions& opt = {});

/// max_t L min_x rho(x, t) together with its maximizer.
struct MaxminValue {
  double t_star = 0.0;
  double scaled = 0.0;
  bool degenerate = false;
};
MaxminValue maxmin_scaled_density(const State& s, const Constants& c, const MaxminOptions& opt = {});

struct JudgeResult {
  double gamma = 0.0;            ///< gamma* in [origin, origin + L)
  double dx_gamma = 0.0;         ///< sqrt of the minimal second moment
  double mean_x_at_gamma = 0.0;  ///< stationarity: should vanish
  double curvature = 0.0;        ///< 1 - L rho(L/2 + gamma*)
  bool curvature_ok = false;
  double bound = 0.0;            ///< (hbar/2) (1 - L rho(L/2 + gamma*))
  double dp = 0.0;
  double lhs_product = 0.0;      ///< dp * dx_gamma
  bool degenerate = false;
};

struct JudgeOptions {
  int grid_points = 1024;
  MatrixElements matrix_elements = MatrixElements::quadrature;
};

/// Minimizes int_{-L/2}^{L/2} x^2 rho(x + gamma) dx over the shift gamma.
JudgeResult judge_minimize(const State& s, double t, const Constants& c, const JudgeOptions& opt = {});

/// (Delta x)_gamma^2 at a given shift, for oracles and diagnostics.
double judge_second_moment(const State& s, double t, double gamma, const Constants& c);

BoundResult to_bound_result(const JudgeResult& j);

struct ChainCheck {
  double min_density_bound = 0.0;  ///< (hbar/2)(1 - L min rho)
  double judge_bound = 0.0;  ///< (hbar/2)(1 - L rho(L/2 + gamma*))
  double min_cut_product = 0.0;  ///< dp * dx on the min-cut window
  double judge_product = 0.0;  ///< dp * (dx)_gamma
  bool ok = false;
};

ChainCheck chain_check(const State& s, double t, const Constants& c, const QuadratureConfig& quad = {});

struct TrigMoments {
  double mean_sin = 0.0;
  double mean_sin2 = 0.0;
  double mean_cos = 0.0;
};

/// <sin(2 pi x / L)>, <sin^2>, <cos> over one period by quadrature.
TrigMoments trig_moments(const State& s, double t, const Constants& c, const QuadratureConfig& quad = {});

/// lhs = dp * Delta((L/2) sin(2 pi x / L)), value = (hbar/2) pi |<cos(2 pi x / L)>|.
BoundResult trig_relation(const State& s, double t, const Constants& c, const QuadratureConfig& quad = {});

}  // namespace pbox
