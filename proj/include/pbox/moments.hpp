#pragma once

#include <string>

#include "pbox/quadrature.hpp"
#include "pbox/state.hpp"

namespace pbox {

struct Window {
  double start = 0.0;
  double width = 1.0;

  double end() const { return start + width; }
};

struct MomentumMoments {
  double mean_p = 0.0;
  double mean_p2 = 0.0;

  double variance() const { return mean_p2 - mean_p * mean_p; }
};

struct PositionMoments {
  double mean_x = 0.0;
  double mean_x2 = 0.0;

  double variance() const { return mean_x2 - mean_x * mean_x; }
};

/// How the envelope momentum <p>_phi(t) of a Bloch-sine state is obtained.
enum class MatrixElements {
  quadrature,  ///< Gauss-Legendre quadrature of the probability current
  analytic,    ///< closed-form sine-basis matrix elements (odd j + k selection rule)
};

/// Plane-wave states: exact coefficient sums. Bloch-sine states:
/// <p> = pbar + <p>_phi, <p^2> = pbar^2 + 2 pbar <p>_phi + <p^2>_phi over the moving window.
MomentumMoments p_moments(const State& s, double t, const Constants& c,
                          MatrixElements method = MatrixElements::quadrature);

/// Envelope moments <p>_phi(t) and <p^2>_phi(t).
MomentumMoments envelope_p_moments(const BlochSineState& s, double t, const Constants& c,
                                   MatrixElements method = MatrixElements::quadrature);

/// <x> and <x^2> of the circle density over `window` by composite
/// Gauss-Legendre quadrature. The window width must equal the box length.
/// Throws NumericalError when panel refinement changes a moment by more than 1e-9
/// (relative to L or L^2). For Bloch-sine states on the moving window the
/// decomposition <x> = (pbar/m) t + <x>_phi is cross-checked against a
/// closed-form series integration.
PositionMoments x_moments(const State& s, double t, const Window& window, const QuadratureConfig& quad,
                          const Constants& c);

/// Panels needed to resolve the density's highest frequency, at least `quad.panels`.
int resolving_panels(const State& s, const QuadratureConfig& quad);

/// Rate of change of <p>_phi caused by the window edges:
/// (1/(mL)) { |sum c_k p_k e^{-i p_k^2 t / (2 m hbar)}|^2 - |sum (-1)^k c_k p_k e^{...}|^2 }.
double boundary_force(const BlochSineState& s, double t, const Constants& c);

struct ConvergenceNorm {
  double sum_abs = 0.0;  ///< sum |c_k p_k|
  double sum_sq = 0.0;   ///< sum |c_k p_k|^2
  double cap = 0.0;
  bool violation = false;  ///< sum_abs > cap
};

/// Default cap on sum |c_k p_k|, in units of the lowest mode momentum pi hbar / L.
inline constexpr double kDefaultConvergenceCapInP1 = 100.0;

ConvergenceNorm convergence_norm(const BlochSineState& s, const Constants& c,
                                 double cap_in_p1 = kDefaultConvergenceCapInP1);

/// Partial sums of sum |c_k p_k| truncated at each K in `cutoffs`.
std::vector<double> convergence_partial_sums(const BlochSineState& s, const Constants& c,
                                             const std::vector<int>& cutoffs);

enum class WindowRule { base, moving_node, min_cut, comoving };
enum class BoundKind { none, cut, min_density, maxmin, judge, trig };

std::string to_string(WindowRule r);
std::string to_string(BoundKind k);
WindowRule parse_window_rule(const std::string& s);
BoundKind parse_bound_kind(const std::string& s);

/// Window chosen by `rule` at time t. base: [origin, origin + L];
/// moving_node: [(pbar/m) t, (pbar/m) t + L] (Bloch-sine only);
/// min_cut: [x0, x0 + L] with x0 the minimum of the circle density;
/// comoving: the base window translated by (<p>/m) t, which is the moving
/// node window for Bloch-sine states.
Window select_window(const State& s, double t, WindowRule rule, const Constants& c);

/// |d<x>/dt - <p>/m| by central differences of <x>(t +- dt); the window is
/// re-selected at each time with the same rule. For min_cut the cut is
/// tracked continuously from its position at t. For comoving windows of
/// plane-wave states the left edge starts at the density maximum and is
/// carried along the local flow velocity j / rho, so no probability crosses it.
double ehrenfest_residual(const State& s, double t, double dt, WindowRule rule, const Constants& c,
                          const QuadratureConfig& quad = {});

struct UncertaintyReport {
  Window window;
  double t = 0.0;
  double mean_x = 0.0;
  double mean_x2 = 0.0;
  double mean_p = 0.0;
  double mean_p2 = 0.0;
  double dx = 0.0;
  double dp = 0.0;
  double product = 0.0;
  BoundKind bound_kind = BoundKind::none;
  double bound_value = 0.0;
};

struct ReportOptions {
  QuadratureConfig quadrature{};
  MatrixElements matrix_elements = MatrixElements::quadrature;
  int maxmin_time_samples = 2048;
};

UncertaintyReport uncertainty_report(const State& s, double t, WindowRule rule, BoundKind bound, const Constants& c,
                                     const ReportOptions& opt = {});

/// sqrt(max(v, 0)); variances within -1e-12 of zero are treated as zero.
double clamped_sqrt(double variance);

}  // namespace pbox
