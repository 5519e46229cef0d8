#pragma once

#include <functional>
#include <span>
#include <vector>

namespace pbox {

/// Composite Gauss-Legendre rule: `panels` equal panels, 16 nodes each.
struct QuadratureConfig {
  int panels = 64;

  static constexpr int kNodesPerPanel = 16;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes and weights of the composite rule on [a, b].
QuadratureRule composite_rule(double a, double b, int panels);

double integrate(const std::function<double(double)>& f, double a, double b, int panels);

inline double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& cfg = {}) {
  return integrate(f, a, b, cfg.panels);
}

/// Integrates f over [a, b] with `panels` panels and again with twice as many.
/// Throws NumericalError when the two results differ by more than
/// `tolerance * max(scale, |result|)`. Returns the refined value.
double integrate_checked(const std::function<double(double)>& f, double a, double b, int panels, double tolerance,
                         double scale);

}  // namespace pbox
