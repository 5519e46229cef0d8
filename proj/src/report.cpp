#include <cmath>

#include "pbox/bounds.hpp"
#include "pbox/moments.hpp"

namespace pbox {

UncertaintyReport uncertainty_report(const State& s, double t, WindowRule rule, BoundKind bound, const Constants& c,
                                     const ReportOptions& opt) {
  c.validate();
  UncertaintyReport r;
  r.t = t;
  r.window = select_window(s, t, rule, c);
  const auto xm = x_moments(s, t, r.window, opt.quadrature, c);
  const auto pm = p_moments(s, t, c, opt.matrix_elements);
  r.mean_x = xm.mean_x;
  r.mean_x2 = xm.mean_x2;
  r.mean_p = pm.mean_p;
  r.mean_p2 = pm.mean_p2;
  r.dx = clamped_sqrt(xm.variance());
  r.dp = clamped_sqrt(pm.variance());
  r.product = r.dx * r.dp;
  r.bound_kind = bound;

  switch (bound) {
    case BoundKind::none: r.bound_value = 0.0; break;
    case BoundKind::cut: r.bound_value = cut_bound(s, t, r.window.start, c, opt.quadrature).value; break;
    case BoundKind::min_density: r.bound_value = 0.5 * c.hbar * (1.0 - density_minimum(s, t, c).scaled); break;
    case BoundKind::maxmin: {
      MaxminOptions mo;
      mo.time_samples = opt.maxmin_time_samples;
      mo.quadrature = opt.quadrature;
      r.bound_value = 0.5 * c.hbar * (1.0 - maxmin_scaled_density(s, c, mo).scaled);
      break;
    }
    case BoundKind::judge: r.bound_value = judge_minimize(s, t, c).bound; break;
    case BoundKind::trig: r.bound_value = trig_relation(s, t, c, opt.quadrature).value; break;
  }
  return r;
}

}  // namespace pbox
