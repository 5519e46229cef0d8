#pragma once

#include <vector>

#include "pbox/state.hpp"

namespace pbox {

/// Closed-form trigonometric series of the circle density at a fixed time,
///
///   rho(base + u) = sum_j Re(coef_j exp(i omega_j u)),   0 <= u < L,
///
/// repeated with period L. Plane-wave densities are genuinely periodic trig
/// polynomials; Bloch-sine window densities use half-integer frequencies
/// k pi / L and are folded at the node.
class DensitySeries {
 public:
  struct Term {
    double omega = 0.0;
    Complex coef;
  };

  static DensitySeries of(const State& s, double t, const Constants& c);

  double period() const { return period_; }
  double base() const { return base_; }
  const std::vector<Term>& terms() const { return terms_; }

  double value(double x) const;

  /// Integral of (x - center)^m rho(x) over [a, b] for m in {0, 1, 2}; b - a <= period.
  double centered_moment(int m, double a, double b, double center) const;

 private:
  double period_ = 1.0;
  double base_ = 0.0;
  std::vector<Term> terms_;
};

}  // namespace pbox
