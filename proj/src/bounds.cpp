#include "pbox/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "pbox/density_series.hpp"

namespace pbox {

namespace {

double window_product(const State& s, double t, const Window& w, const QuadratureConfig& quad, const Constants& c) {
  const auto xm = x_moments(s, t, w, quad, c);
  const auto pm = p_moments(s, t, c);
  return clamped_sqrt(xm.variance()) * clamped_sqrt(pm.variance());
}

BoundResult finish(BoundKind kind, double value, std::optional<double> witness, double lhs, bool degenerate) {
  return {kind, value, witness, lhs, lhs >= value - kBoundSlack, degenerate};
}

double state_origin(const State& s) {
  return std::visit([](const auto& st) { return st.domain().origin; }, s);
}

}  // namespace

DensityMinimum density_minimum(const State& s, double t, const Constants& c, const CircleSearchOptions& opt) {
  const double l = state_length(s);
  if (const auto* b = std::get_if<BlochSineState>(&s)) {
    // Locality: the envelope vanishes at the moving node for every t.
    const double x0 = wrap_into(b->node_position(t, c), 0.0, l);
    const double rho = circle_density(s, x0, t, c);
    return {x0, rho, l * rho, false};
  }
  const double origin = state_origin(s);
  const auto samples = sample_circle_density(s, t, origin, l / opt.grid_points, opt.grid_points, c);
  CircleSearchOptions local = opt;
  local.tie_tolerance = opt.tie_tolerance * *std::max_element(samples.begin(), samples.end());
  const Snapshot snap(s, t, c);
  const ScalarFunction f = [&](double x) { return snap.circle_density(x); };
  const ScalarFunction df = [&](double x) { return snap.circle_density_gradient(x); };
  const auto m = minimize_on_circle_sampled(samples, f, &df, origin, l, local);
  return {m.x, m.value, l * m.value, m.degenerate};
}

double track_density_minimum(const State& s, double t, double near, double half_width, const Constants& c) {
  const double l = state_length(s);
  if (const auto* b = std::get_if<BlochSineState>(&s)) {
    const double node = b->node_position(t, c);
    return node + l * std::round((near - node) / l);
  }
  const Snapshot snap(s, t, c);
  constexpr int kPoints = 257;
  const double h = 2.0 * half_width / (kPoints - 1);
  int best = 0;
  double best_value = snap.circle_density(near - half_width);
  for (int i = 1; i < kPoints; ++i) {
    const double v = snap.circle_density(near - half_width + i * h);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = near - half_width + std::max(best - 1, 0) * h;
  const double hi = near - half_width + std::min(best + 1, kPoints - 1) * h;
  const auto golden = golden_section_minimize([&](double x) { return snap.circle_density(x); }, lo, hi, 1e-12 * l);
  const auto root = bisect_sign_change([&](double x) { return snap.circle_density_gradient(x); }, lo, hi, 1e-13 * l);
  if (root.found && snap.circle_density(root.x) <= golden.value) return root.x;
  return golden.x;
}

BoundResult cut_bound(const State& s, double t, double cut_x, const Constants& c, const QuadratureConfig& quad) {
  const double l = state_length(s);
  const double value = 0.5 * c.hbar * std::abs(1.0 - l * circle_density(s, cut_x, t, c));
  return finish(BoundKind::cut, value, cut_x, window_product(s, t, {cut_x, l}, quad, c), false);
}

BoundResult min_density_cut(const State& s, double t, const Constants& c, const QuadratureConfig& quad) {
  const auto m = density_minimum(s, t, c);
  const double value = 0.5 * c.hbar * (1.0 - m.scaled);
  return finish(BoundKind::min_density, value, m.x0, window_product(s, t, {m.x0, state_length(s)}, quad, c),
                m.degenerate);
}

MaxminValue maxmin_scaled_density(const State& s, const Constants& c, const MaxminOptions& opt) {
  if (std::holds_alternative<BlochSineState>(s)) return {0.0, 0.0, true};
  const double period = recurrence_period(s, c);
  const int n = opt.time_samples;
  std::vector<double> negated(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    negated[static_cast<std::size_t>(i)] = -density_minimum(s, period * i / n, c, opt.search).scaled;
  const ScalarFunction f = [&](double t) { return -density_minimum(s, t, c, opt.search).scaled; };
  CircleSearchOptions time_search;
  time_search.x_tolerance_rel = 1e-12;
  time_search.tie_tolerance = 1e-10;
  const auto m = minimize_on_circle_sampled(negated, f, nullptr, 0.0, period, time_search);
  return {m.x, -m.value, m.degenerate};
}

BoundResult maxmin_bound(const State& s, const Constants& c, const MaxminOptions& opt) {
  const auto mm = maxmin_scaled_density(s, c, opt);
  const double value = 0.5 * c.hbar * (1.0 - mm.scaled);
  const auto at_t = density_minimum(s, mm.t_star, c, opt.search);
  const double lhs = window_product(s, mm.t_star, {at_t.x0, state_length(s)}, opt.quadrature, c);
  return finish(BoundKind::maxmin, value, mm.t_star, lhs, mm.degenerate);
}

double judge_second_moment(const State& s, double t, double gamma, const Constants& c) {
  const auto series = DensitySeries::of(s, t, c);
  const double half = 0.5 * series.period();
  return series.centered_moment(2, gamma - half, gamma + half, gamma);
}

JudgeResult judge_minimize(const State& s, double t, const Constants& c, const JudgeOptions& opt) {
  const auto series = DensitySeries::of(s, t, c);
  const double l = series.period();
  const double half = 0.5 * l;
  const ScalarFunction second = [&](double g) { return series.centered_moment(2, g - half, g + half, g); };
  const ScalarFunction slope = [&](double g) { return -2.0 * series.centered_moment(1, g - half, g + half, g); };

  const double origin = state_origin(s);
  std::vector<double> samples(static_cast<std::size_t>(opt.grid_points));
  for (int i = 0; i < opt.grid_points; ++i) samples[static_cast<std::size_t>(i)] = second(origin + l * i / opt.grid_points);
  CircleSearchOptions search;
  search.tie_tolerance = 1e-12 * *std::max_element(samples.begin(), samples.end());
  const auto m = minimize_on_circle_sampled(samples, second, &slope, origin, l, search);

  JudgeResult r;
  r.gamma = m.x;
  r.dx_gamma = clamped_sqrt(m.value);
  r.mean_x_at_gamma = series.centered_moment(1, m.x - half, m.x + half, m.x);
  r.curvature = 1.0 - l * circle_density(s, m.x + half, t, c);
  r.curvature_ok = r.curvature >= -1e-8;
  r.bound = 0.5 * c.hbar * r.curvature;
  r.dp = clamped_sqrt(p_moments(s, t, c, opt.matrix_elements).variance());
  r.lhs_product = r.dp * r.dx_gamma;
  r.degenerate = m.degenerate;
  return r;
}

BoundResult to_bound_result(const JudgeResult& j) {
  return finish(BoundKind::judge, j.bound, j.gamma, j.lhs_product, j.degenerate);
}

ChainCheck chain_check(const State& s, double t, const Constants& c, const QuadratureConfig& quad) {
  const auto m = density_minimum(s, t, c);
  const auto j = judge_minimize(s, t, c);
  ChainCheck out;
  out.min_density_bound = 0.5 * c.hbar * (1.0 - m.scaled);
  out.judge_bound = j.bound;
  out.min_cut_product = window_product(s, t, {m.x0, state_length(s)}, quad, c);
  out.judge_product = j.lhs_product;
  out.ok = out.min_density_bound >= out.judge_bound - kBoundSlack && out.min_cut_product >= out.judge_product - kBoundSlack;
  return out;
}

TrigMoments trig_moments(const State& s, double t, const Constants& c, const QuadratureConfig& quad) {
  const double l = state_length(s);
  const double a = reference_window_start(s, t, c);
  const int panels = resolving_panels(s, quad) + 2;
  const double kappa = 2.0 * kPi / l;
  const Snapshot snap(s, t, c);
  TrigMoments m;
  m.mean_sin = integrate([&](double x) { return std::sin(kappa * x) * snap.circle_density(x); }, a, a + l, panels);
  m.mean_sin2 = integrate(
      [&](double x) {
        const double v = std::sin(kappa * x);
        return v * v * snap.circle_density(x);
      },
      a, a + l, panels);
  m.mean_cos = integrate([&](double x) { return std::cos(kappa * x) * snap.circle_density(x); }, a, a + l, panels);
  return m;
}

BoundResult trig_relation(const State& s, double t, const Constants& c, const QuadratureConfig& quad) {
  const double l = state_length(s);
  const auto m = trig_moments(s, t, c, quad);
  const double spread = 0.5 * l * clamped_sqrt(m.mean_sin2 - m.mean_sin * m.mean_sin);
  const double dp = clamped_sqrt(p_moments(s, t, c).variance());
  const double value = 0.5 * c.hbar * kPi * std::abs(m.mean_cos);
  return finish(BoundKind::trig, value, std::nullopt, dp * spread, false);
}

}  // namespace pbox
