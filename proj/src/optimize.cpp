#include "pbox/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pbox/constants.hpp"

namespace pbox {

ScalarMinimum golden_section_minimize(const ScalarFunction& f, double lo, double hi, double x_tolerance,
                                      int max_iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iterations && (b - a) > x_tolerance; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    if (!(c < d)) break;
  }
  return fc <= fd ? ScalarMinimum{c, fc} : ScalarMinimum{d, fd};
}

RootResult bisect_sign_change(const ScalarFunction& g, double lo, double hi, double x_tolerance, int max_iterations) {
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return {lo, true};
  if (ghi == 0.0) return {hi, true};
  if ((glo < 0.0) == (ghi < 0.0)) return {0.5 * (lo + hi), false};
  for (int it = 0; it < max_iterations && (hi - lo) > x_tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return {mid, true};
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), true};
}

std::vector<std::size_t> cyclic_local_minima(std::span<const double> samples, double slack, std::size_t max_count) {
  const std::size_t n = samples.size();
  std::vector<std::size_t> out;
  if (n == 0) return out;
  const double global = *std::min_element(samples.begin(), samples.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = samples[(i + n - 1) % n];
    const double next = samples[(i + 1) % n];
    if (samples[i] <= prev && samples[i] <= next && samples[i] <= global + slack) out.push_back(i);
  }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) { return samples[a] < samples[b]; });
  if (out.size() > max_count) out.resize(max_count);
  return out;
}

CircleMinimum minimize_on_circle(const ScalarFunction& f, const ScalarFunction* derivative, double start, double period,
                                 const CircleSearchOptions& options) {
  const int n = options.grid_points;
  std::vector<double> samples(static_cast<std::size_t>(n));
  const double h = period / n;
  for (int i = 0; i < n; ++i) samples[static_cast<std::size_t>(i)] = f(start + i * h);
  return minimize_on_circle_sampled(samples, f, derivative, start, period, options);
}

CircleMinimum minimize_on_circle_sampled(std::span<const double> samples, const ScalarFunction& f,
                                         const ScalarFunction* derivative, double start, double period,
                                         const CircleSearchOptions& options) {
  const std::size_t n = samples.size();
  const double h = period / static_cast<double>(n);
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double spread = *hi_it - *lo_it;
  const double scale = std::max(std::abs(*hi_it), std::abs(*lo_it));

  if (spread <= 1e-13 * scale || spread == 0.0) {
    return {start, f(start), true};
  }

  const double slack = 1e-3 * spread;
  const auto candidates = cyclic_local_minima(samples, slack, options.max_candidates);
  const double x_tol = options.x_tolerance_rel * period;

  std::vector<CircleMinimum> refined;
  for (std::size_t idx : candidates) {
    const double center = start + static_cast<double>(idx) * h;
    const double lo = center - h;
    const double hi = center + h;
    auto best = golden_section_minimize(f, lo, hi, x_tol);
    if (derivative != nullptr) {
      // Polish on the sign change of the derivative; function comparisons
      // alone stall near sqrt(machine epsilon) for non-zero minima.
      const double w = std::max(16.0 * x_tol, 1e-6 * h);
      double plo = std::max(lo, best.x - w);
      double phi = std::min(hi, best.x + w);
      auto root = bisect_sign_change(*derivative, plo, phi, x_tol);
      if (!root.found) root = bisect_sign_change(*derivative, lo, hi, x_tol);
      if (root.found) {
        const double v = f(root.x);
        if (v <= best.value + 1e-12 * std::max(1.0, std::abs(best.value))) best = {root.x, v};
      }
    }
    double x = wrap_into(best.x, start, period);
    if (start + period - x < x_tol) x = start;
    refined.push_back({x, best.value, false});
  }

  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& r : refined) best_value = std::min(best_value, r.value);
  std::vector<CircleMinimum> ties;
  const double same_point = 1e3 * x_tol + 1e-9 * period;
  for (const auto& r : refined) {
    if (r.value > best_value + options.tie_tolerance) continue;
    const bool seen = std::any_of(ties.begin(), ties.end(), [&](const CircleMinimum& q) {
      const double d = std::abs(q.x - r.x);
      return std::min(d, period - d) < same_point;
    });
    if (!seen) ties.push_back(r);
  }
  CircleMinimum result = *std::min_element(
      ties.begin(), ties.end(), [](const CircleMinimum& a, const CircleMinimum& b) { return a.x < b.x; });
  result.degenerate = ties.size() > 1;
  return result;
}

}  // namespace pbox
