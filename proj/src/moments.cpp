#include "pbox/moments.hpp"

#include <algorithm>
#include <cmath>

#include "pbox/bounds.hpp"
#include "pbox/density_series.hpp"

namespace pbox {

double clamped_sqrt(double variance) { return std::sqrt(std::max(variance, 0.0)); }

int resolving_panels(const State& s, const QuadratureConfig& quad) {
  int highest = 0;
  if (const auto* p = std::get_if<PlaneWaveState>(&s)) {
    int lo = p->modes().front().n;
    int hi = lo;
    for (const auto& m : p->modes()) {
      lo = std::min(lo, m.n);
      hi = std::max(hi, m.n);
    }
    highest = hi - lo;
  } else {
    highest = std::get<BlochSineState>(s).max_mode();
  }
  int panels = std::max(quad.panels, 2 * highest);
  return panels + (panels % 2);
}

MomentumMoments envelope_p_moments(const BlochSineState& s, double t, const Constants& c, MatrixElements method) {
  double p2 = 0.0;
  for (const auto& m : s.coeffs()) {
    const double pk = s.mode_momentum(m.k, c);
    p2 += std::norm(m.amplitude) * pk * pk;
  }
  double p1 = 0.0;
  if (method == MatrixElements::analytic) {
    p1 = mean_momentum(State{BlochSineState(s.length(), 0.0, {s.coeffs().begin(), s.coeffs().end()})}, t, c);
  } else {
    const int panels = std::max(QuadratureConfig{}.panels, 2 * s.max_mode());
    const Snapshot snap(State{s}, t, c);
    p1 = c.hbar * integrate(
                      [&](double y) { return std::imag(std::conj(snap.envelope(y)) * snap.envelope_gradient(y)); },
                      0.0, s.length(), panels);
  }
  return {p1, p2};
}

MomentumMoments p_moments(const State& s, double t, const Constants& c, MatrixElements method) {
  c.validate();
  if (const auto* p = std::get_if<PlaneWaveState>(&s)) {
    MomentumMoments out;
    for (const auto& m : p->modes()) {
      const double pn = c.hbar * p->wavenumber(m.n);
      const double w = std::norm(m.amplitude);
      out.mean_p += w * pn;
      out.mean_p2 += w * pn * pn;
    }
    return out;
  }
  const auto& b = std::get<BlochSineState>(s);
  const auto env = envelope_p_moments(b, t, c, method);
  const double pbar = b.bloch_momentum();
  return {pbar + env.mean_p, pbar * pbar + 2.0 * pbar * env.mean_p + env.mean_p2};
}

PositionMoments x_moments(const State& s, double t, const Window& window, const QuadratureConfig& quad,
                          const Constants& c) {
  c.validate();
  const double l = state_length(s);
  if (std::abs(window.width - l) > 1e-12 * l)
    throw PreconditionError("moment window width must equal the box length");

  const int panels = resolving_panels(s, quad);
  std::vector<double> cuts{window.start};
  if (std::holds_alternative<BlochSineState>(s)) {
    // The folded window density has a kink at the node; integrate each side separately.
    const double node = wrap_into(reference_window_start(s, t, c), window.start, l);
    if (node - window.start > 1e-14 * l) cuts.push_back(node);
  }
  cuts.push_back(window.end());

  const Snapshot snap(s, t, c);
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const int piece_panels = std::max(4, static_cast<int>(std::ceil(panels * (b - a) / l)));
    const double scale1 = l * std::max(1.0, std::abs(window.start) / l + 1.0);
    m1 += integrate_checked([&](double x) { return x * snap.circle_density(x); }, a, b, piece_panels, 1e-9,
                            scale1);
    m2 += integrate_checked([&](double x) { return x * x * snap.circle_density(x); }, a, b, piece_panels, 1e-9,
                            scale1 * scale1);
  }

  if (const auto* bs = std::get_if<BlochSineState>(&s)) {
    const double node = bs->node_position(t, c);
    if (std::abs(window.start - node) <= 1e-12 * std::max(l, std::abs(node))) {
      const auto series = DensitySeries::of(s, t, c);
      const double envelope_mean = series.centered_moment(1, node, node + l, node);
      if (std::abs(m1 - (node + envelope_mean)) > 1e-9 * std::max(l, std::abs(m1)))
        throw NumericalError("moving-window <x> disagrees with (pbar/m) t + <x>_phi");
    }
  }
  return {m1, m2};
}

double boundary_force(const BlochSineState& s, double t, const Constants& c) {
  Complex left{};
  Complex right{};
  for (const auto& m : s.coeffs()) {
    const double pk = s.mode_momentum(m.k, c);
    const Complex term = m.amplitude * std::polar(pk, -pk * pk * t / (2.0 * c.mass * c.hbar));
    left += term;
    right += (m.k % 2 == 0) ? term : -term;
  }
  return (std::norm(left) - std::norm(right)) / (c.mass * s.length());
}

ConvergenceNorm convergence_norm(const BlochSineState& s, const Constants& c, double cap_in_p1) {
  ConvergenceNorm out;
  for (const auto& m : s.coeffs()) {
    const double v = std::abs(m.amplitude) * s.mode_momentum(m.k, c);
    out.sum_abs += v;
    out.sum_sq += v * v;
  }
  out.cap = cap_in_p1 * s.mode_momentum(1, c);
  out.violation = out.sum_abs > out.cap;
  return out;
}

std::vector<double> convergence_partial_sums(const BlochSineState& s, const Constants& c,
                                             const std::vector<int>& cutoffs) {
  std::vector<double> out;
  out.reserve(cutoffs.size());
  for (int cutoff : cutoffs) {
    double sum = 0.0;
    for (const auto& m : s.coeffs())
      if (m.k <= cutoff) sum += std::abs(m.amplitude) * s.mode_momentum(m.k, c);
    out.push_back(sum);
  }
  return out;
}

std::string to_string(WindowRule r) {
  switch (r) {
    case WindowRule::base: return "base";
    case WindowRule::moving_node: return "moving_node";
    case WindowRule::min_cut: return "min_cut";
    case WindowRule::comoving: return "comoving";
  }
  return "?";
}

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::none: return "none";
    case BoundKind::cut: return "cut";
    case BoundKind::min_density: return "min_density";
    case BoundKind::maxmin: return "maxmin";
    case BoundKind::judge: return "judge";
    case BoundKind::trig: return "trig";
  }
  return "?";
}

WindowRule parse_window_rule(const std::string& s) {
  if (s == "base") return WindowRule::base;
  if (s == "moving_node") return WindowRule::moving_node;
  if (s == "min_cut") return WindowRule::min_cut;
  if (s == "comoving") return WindowRule::comoving;
  throw PreconditionError("unknown window rule '" + s + "'");
}

BoundKind parse_bound_kind(const std::string& s) {
  for (auto k : {BoundKind::none, BoundKind::cut, BoundKind::min_density, BoundKind::maxmin, BoundKind::judge,
                 BoundKind::trig})
    if (to_string(k) == s) return k;
  throw PreconditionError("unknown bound kind '" + s + "'");
}

Window select_window(const State& s, double t, WindowRule rule, const Constants& c) {
  const double l = state_length(s);
  switch (rule) {
    case WindowRule::base:
      return {std::visit([](const auto& st) { return st.domain().origin; }, s), l};
    case WindowRule::moving_node:
      if (!std::holds_alternative<BlochSineState>(s))
        throw PreconditionError("moving_node window requires a Bloch-sine state");
      return {reference_window_start(s, t, c), l};
    case WindowRule::min_cut:
      return {density_minimum(s, t, c).x0, l};
    case WindowRule::comoving:
      if (std::holds_alternative<BlochSineState>(s)) return {reference_window_start(s, t, c), l};
      return {std::get<PlaneWaveState>(s).domain().origin + p_moments(s, t, c).mean_p / c.mass * t, l};
  }
  return {0.0, l};
}

double ehrenfest_residual(const State& s, double t, double dt, WindowRule rule, const Constants& c,
                          const QuadratureConfig& quad) {
  if (!(dt > 0.0)) throw PreconditionError("Ehrenfest step dt must be positive");
  const double l = state_length(s);
  Window here = select_window(s, t, rule, c);
  const bool follow_flow = rule == WindowRule::comoving && std::holds_alternative<PlaneWaveState>(s);
  if (follow_flow) {
    constexpr int samples = 256;
    const auto rho = sample_circle_density(s, t, here.start, l / samples, samples, c);
    here.start += l / samples * static_cast<double>(std::max_element(rho.begin(), rho.end()) - rho.begin());
  }
  auto flow_velocity = [&](double x, double when) {
    const Complex psi = evaluate(s, x, when, c);
    const double rho = std::norm(psi);
    if (!(rho > 0.0)) throw NumericalError("comoving window edge sits on a node");
    return c.hbar / c.mass * std::imag(std::conj(psi) * evaluate_gradient(s, x, when, c)) / rho;
  };
  auto advect = [&](double step) {
    constexpr int substeps = 32;
    const double h = step / substeps;
    double x = here.start;
    double when = t;
    for (int i = 0; i < substeps; ++i) {
      const double k1 = flow_velocity(x, when);
      const double k2 = flow_velocity(x + 0.5 * h * k1, when + 0.5 * h);
      const double k3 = flow_velocity(x + 0.5 * h * k2, when + 0.5 * h);
      const double k4 = flow_velocity(x + h * k3, when + h);
      x += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
      when += h;
    }
    return x;
  };
  auto window_at = [&](double when, double anchor) -> Window {
    if (follow_flow) return {advect(when - t), l};
    if (rule != WindowRule::min_cut) return select_window(s, when, rule, c);
    return {track_density_minimum(s, when, anchor, l / 64.0, c), l};
  };
  const double forward = x_moments(s, t + dt, window_at(t + dt, here.start), quad, c).mean_x;
  const double backward = x_moments(s, t - dt, window_at(t - dt, here.start), quad, c).mean_x;
  const double velocity = (forward - backward) / (2.0 * dt);
  return std::abs(velocity - p_moments(s, t, c).mean_p / c.mass);
}

}  // namespace pbox
