#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pbox {

using ScalarFunction = std::function<double(double)>;

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a minimum of f inside [lo, hi]. Stops when the
/// bracket is narrower than `x_tolerance` or the comparisons stop making
/// progress in floating point.
ScalarMinimum golden_section_minimize(const ScalarFunction& f, double lo, double hi, double x_tolerance,
                                      int max_iterations = 400);

/// Bisection for a sign change of g inside [lo, hi]. Returns nullopt-like
/// `false` in `found` when g(lo) and g(hi) do not bracket a root.
struct RootResult {
  double x = 0.0;
  bool found = false;
};
RootResult bisect_sign_change(const ScalarFunction& g, double lo, double hi, double x_tolerance,
                              int max_iterations = 200);

/// Indices of cyclic local minima of `samples` whose value is within `slack`
/// of the global minimum, ordered by ascending value, at most `max_count`.
std::vector<std::size_t> cyclic_local_minima(std::span<const double> samples, double slack, std::size_t max_count);

/// Options for minimizing a function on a circle of circumference `period`
/// starting at `start`: uniform scan, golden-section refinement around the
/// best candidates, and an optional bisection polish on the derivative.
struct CircleSearchOptions {
  int grid_points = 4096;
  double x_tolerance_rel = 1e-12;  ///< relative to the period
  double tie_tolerance = 1e-12;    ///< absolute, on function values
  std::size_t max_candidates = 8;
};

struct CircleMinimum {
  double x = 0.0;
  double value = 0.0;
  bool degenerate = false;  ///< several (or a continuum of) global minima
};

CircleMinimum minimize_on_circle(const ScalarFunction& f, const ScalarFunction* derivative, double start, double period,
                                 const CircleSearchOptions& options);

/// Same scan, but `f` is given on pre-sampled grid values (evaluated by the
/// caller, possibly in bulk) and only refinement calls `f`.
CircleMinimum minimize_on_circle_sampled(std::span<const double> samples, const ScalarFunction& f,
                                         const ScalarFunction* derivative, double start, double period,
                                         const CircleSearchOptions& options);

}  // namespace pbox
