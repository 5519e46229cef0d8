#include "pbox/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "pbox/errors.hpp"

namespace pbox {

namespace {

using Gauss16 = boost::math::quadrature::gauss<double, QuadratureConfig::kNodesPerPanel>;

// Boost stores the non-negative half of the symmetric rule.
struct ReferenceRule {
  std::vector<double> x;
  std::vector<double> w;
};

const ReferenceRule& reference_rule() {
  static const ReferenceRule rule = [] {
    ReferenceRule r;
    const auto& abscissa = Gauss16::abscissa();
    const auto& weights = Gauss16::weights();
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      if (abscissa[i] == 0.0) {
        r.x.push_back(0.0);
        r.w.push_back(weights[i]);
        continue;
      }
      r.x.push_back(-abscissa[i]);
      r.w.push_back(weights[i]);
      r.x.push_back(abscissa[i]);
      r.w.push_back(weights[i]);
    }
    std::vector<std::size_t> order(r.x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.x[a] < r.x[b]; });
    ReferenceRule sorted;
    for (auto i : order) {
      sorted.x.push_back(r.x[i]);
      sorted.w.push_back(r.w[i]);
    }
    return sorted;
  }();
  return rule;
}

}  // namespace

QuadratureRule composite_rule(double a, double b, int panels) {
  if (panels < 1) throw PreconditionError("quadrature needs at least one panel");
  const auto& ref = reference_rule();
  QuadratureRule rule;
  rule.nodes.reserve(ref.x.size() * static_cast<std::size_t>(panels));
  rule.weights.reserve(rule.nodes.capacity());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < ref.x.size(); ++i) {
      rule.nodes.push_back(mid + 0.5 * h * ref.x[i]);
      rule.weights.push_back(0.5 * h * ref.w[i]);
    }
  }
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  if (a == b) return 0.0;
  const auto& ref = reference_rule();
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double panel_sum = 0.0;
    for (std::size_t i = 0; i < ref.x.size(); ++i) panel_sum += ref.w[i] * f(mid + 0.5 * h * ref.x[i]);
    total += 0.5 * h * panel_sum;
  }
  return total;
}

double integrate_checked(const std::function<double(double)>& f, double a, double b, int panels, double tolerance,
                         double scale) {
  const double coarse = integrate(f, a, b, panels);
  const double fine = integrate(f, a, b, 2 * panels);
  const double delta = std::abs(fine - coarse);
  if (delta > tolerance * std::max(scale, std::abs(fine))) {
    throw NumericalError("quadrature did not converge: panel-refinement delta " + std::to_string(delta));
  }
  return fine;
}

}  // namespace pbox
