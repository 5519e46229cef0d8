#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pbox/bounds.hpp"
#include "pbox/catalog.hpp"
#include "pbox/moments.hpp"
#include "pbox/statespec.hpp"
#include "support.hpp"

using namespace pbox;
using pbox::testing::uniform;

namespace {

const Constants kUnit{};
constexpr double kL = 2.0 * kPi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

double circular_distance(double a, double b, double period) {
  const double d = std::abs(std::remainder(a - b, period));
  return d;
}

Outcome maxmin_packet() {
  const ThreeWavePacketParams p{1, 0.5, kL, 0.0};
  const double analytic = packet_min_and_maxmin(p, std::nullopt, kUnit).bound;
  const double grid = maxmin_bound(three_wave_packet(p), kUnit).value;
  const double e1 = std::abs(analytic - 1.0 / 6.0);
  const double e2 = std::abs(grid - 1.0 / 6.0);
  return {e1 <= 1e-12 && e2 <= 1e-8, fmt("analytic err %.2e, grid err %.2e", e1, e2)};
}

Outcome cut_at_half_box() {
  const State s = three_wave_packet({1, 0.5, kL, 0.0});
  double worst = std::abs(cut_bound(s, 0.0, kL / 2, kUnit).value - 0.5);
  const double at_half = worst;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const double b = uniform(rng, 0.05, 3.0);
    const State sb = three_wave_packet({1, b, kL, 0.0});
    const double expected = 0.5 * std::abs(1.0 - (1.0 - 2.0 * b) * (1.0 - 2.0 * b) / (1.0 + 2.0 * b * b));
    worst = std::max(worst, std::abs(cut_bound(sb, 0.0, kL / 2, kUnit).value - expected));
  }
  return {worst <= 1e-10, fmt("b=1/2 err %.2e, worst over 20 b %.2e", at_half, worst)};
}

Outcome packet_dp() {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int n : {-3, 0, 1, 4, 9}) {
    for (double b : {0.3, 0.5, 1.7}) {
      const double l = uniform(rng, 1.0, 20.0);
      const State s = three_wave_packet({n, b, l, 0.0});
      const double expected = std::sqrt(2.0 * b * b / (1.0 + 2.0 * b * b)) * 2.0 * kPi / l;
      for (int i = 0; i < 32; ++i) {
        const double t = uniform(rng, 0.0, 50.0);
        worst = std::max(worst, std::abs(clamped_sqrt(p_moments(s, t, kUnit).variance()) - expected));
      }
    }
  }
  return {worst <= 1e-10, fmt("max deviation %.2e", worst)};
}

Outcome elementary_states() {
  double worst = 0.0;
  double product_k1 = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const ElementaryParams p{3, k, PairSign::none, kL};
    const State s = half_box_state(p, kUnit);
    const auto closed = elementary_closed_forms(p, kUnit);
    for (double t : {0.0, 0.37, 2.9}) {
      const auto w = select_window(s, t, WindowRule::moving_node, kUnit);
      const auto xm = x_moments(s, t, w, {}, kUnit);
      const auto pm = p_moments(s, t, kUnit);
      const double dx = clamped_sqrt(xm.variance());
      const double dp = clamped_sqrt(pm.variance());
      worst = std::max({worst, std::abs(xm.mean_x - elementary_mean_x(p, t, kUnit)),
                        std::abs(xm.mean_x2 - elementary_mean_x2(p, t, kUnit)), std::abs(pm.mean_p - closed.mean_p),
                        std::abs(dx - closed.dx), std::abs(dp - closed.dp), std::abs(dx * dp - closed.product)});
      if (k == 1 && t == 0.0) product_k1 = dx * dp;
    }
  }
  const bool ok = worst <= 1e-8 && std::abs(product_k1 - 0.567862) <= 1e-6 && product_k1 > 0.5;
  return {ok, fmt("worst moment err %.2e, k=1 product %.8f", worst, product_k1)};
}

Outcome maxmin_grid() {
  double worst = 0.0;
  for (double b : {0.25, 0.5, 1.0, 2.0}) {
    const auto m = maxmin_scaled_density(three_wave_packet({1, b, kL, 0.0}), kUnit);
    worst = std::max(worst, std::abs(m.scaled - 1.0 / (1.0 + 2.0 * b * b)));
  }
  return {worst <= 1e-6, fmt("worst err %.2e", worst)};
}

Outcome plane_wave_values() {
  double worst = 0.0;
  for (int n : {0, 1, 5}) {
    for (double l : {1.0, kL, 17.0}) {
      const State s = plane_wave(n, {l, 0.3});
      const double dp = clamped_sqrt(p_moments(s, 0.8, kUnit).variance());
      const double dx = clamped_sqrt(x_moments(s, 0.8, select_window(s, 0.8, WindowRule::base, kUnit), {}, kUnit).variance());
      worst = std::max({worst, dp, std::abs(dx - l / std::sqrt(12.0))});
      worst = std::max({worst, std::abs(cut_bound(s, 0.8, 0.4 * l, kUnit).value),
                        std::abs(min_density_cut(s, 0.8, kUnit).value), std::abs(maxmin_bound(s, kUnit).value),
                        std::abs(judge_minimize(s, 0.8, kUnit).bound), std::abs(trig_relation(s, 0.8, kUnit).value)});
    }
  }
  return {worst <= 1e-10, fmt("worst deviation %.2e", worst)};
}

Outcome sine_state() {
  double worst = 0.0;
  double min_product = 1e300;
  for (double l : {1.0, kL, 13.0}) {
    const State s = sine_test_state(l);
    for (double t : {0.0, 1.1}) {
      const double dp = clamped_sqrt(p_moments(s, t, kUnit).variance());
      const auto tm = trig_moments(s, t, kUnit);
      const double spread = (l / 2.0) * clamped_sqrt(tm.mean_sin2 - tm.mean_sin * tm.mean_sin);
      worst = std::max({worst, std::abs(dp - 2.0 * kPi / l), std::abs(spread - std::sqrt(3.0) * l / 4.0)});
      min_product = std::min(min_product, min_density_cut(s, t, kUnit).lhs_product);
    }
  }
  return {worst <= 1e-10 && min_product >= 0.5, fmt("worst deviation %.2e, min-cut product %.6f", worst, min_product)};
}

Outcome inequality_chain() {
  std::mt19937_64 rng(8);
  int failures = 0;
  double worst = 1e300;
  for (int i = 0; i < 100; ++i) {
    const State s = pbox::testing::random_plane_wave_state(rng, 5, 6, uniform(rng, 1.0, 10.0), uniform(rng, -2.0, 2.0));
    const double period = recurrence_period(s, kUnit);
    for (int j = 0; j < 4; ++j) {
      const auto ch = chain_check(s, uniform(rng, 0.0, period), kUnit);
      worst = std::min({worst, ch.min_density_bound - ch.judge_bound, ch.min_cut_product - ch.judge_product});
      if (!ch.ok) ++failures;
    }
  }
  return {failures == 0, fmt("%.0f violations, smallest margin %.2e", failures, worst)};
}

double ramp_force(double l) {
  StateSpec spec = parse_state_spec_text("kind = profile\nprofile = ramp\nw_left = 0.25\nw_right = 0.5\np_bar = 0\n");
  spec.length = l;
  spec.truncation = static_cast<int>(std::lround(16.0 * l));
  const auto built = build_state(spec);
  return std::abs(boundary_force(std::get<BlochSineState>(built.state), 0.0, built.constants));
}

Outcome boundary_force_check() {
  std::mt19937_64 rng(9);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto s = pbox::testing::random_bloch_state(rng, 2, 6, uniform(rng, 1.0, 8.0), uniform(rng, -2.0, 2.0));
    const double t = uniform(rng, 0.0, 5.0);
    const double h = 1e-4 * recurrence_period(s, kUnit);
    const double fd = (envelope_p_moments(s, t + h, kUnit).mean_p - envelope_p_moments(s, t - h, kUnit).mean_p) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - boundary_force(s, t, kUnit)));
  }
  const double ratio = ramp_force(20.0) / ramp_force(40.0);
  return {worst <= 1e-5 && std::abs(ratio - 2.0) <= 0.1, fmt("worst FD err %.2e, doubling ratio %.4f", worst, ratio)};
}

Outcome ehrenfest() {
  std::vector<std::pair<std::string, State>> states = {
      {"three_wave_packet", three_wave_packet({1, 0.5, kL, 0.0})},
      {"three_wave_packet n=3", three_wave_packet({3, 1.3, 5.0, 0.4})},
      {"plane_wave", plane_wave(2, {kL, 0.0})},
      {"sine_test", sine_test_state(kL)},
      {"bloch_pair+", bloch_pair_state({1, 2, PairSign::plus, kL})},
      {"bloch_pair-", bloch_pair_state({2, 1, PairSign::minus, kL})},
      {"half_box k=1", half_box_state({4, 1, PairSign::none, kL}, kUnit)},
      {"half_box k=3", half_box_state({1, 3, PairSign::none, kL}, kUnit)},
  };
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, s] : states) {
    const double period = recurrence_period(s, kUnit);
    for (double f : {0.0, 0.13, 0.71}) {
      const double r = ehrenfest_residual(s, f * period, period / 1000.0, WindowRule::comoving, kUnit);
      if (r > worst) {
        worst = r;
        worst_name = name;
      }
    }
  }
  return {worst < 1e-6, fmt("worst residual %.2e", worst) + (worst_name.empty() ? "" : " (" + worst_name + ")")};
}

Outcome bloch_structure() {
  std::mt19937_64 rng(10);
  std::vector<BlochSineState> states = {half_box_state({4, 1, PairSign::none, kL}, kUnit),
                                        half_box_state({-2, 3, PairSign::none, 3.0}, kUnit)};
  for (int i = 0; i < 4; ++i)
    states.push_back(pbox::testing::random_bloch_state(rng, 4, 8, uniform(rng, 1.0, 8.0), uniform(rng, -3.0, 3.0)));
  double periodicity = 0.0;
  double node = 0.0;
  for (const auto& s : states) {
    const double l = s.length();
    const Complex phase = std::polar(1.0, 2.0 * s.bloch_momentum() * l / kUnit.hbar);
    for (int i = 0; i < 100; ++i) {
      const double x = uniform(rng, -2.0 * l, 2.0 * l);
      const double t = uniform(rng, 0.0, 10.0);
      periodicity = std::max(periodicity, std::abs(evaluate(s, x + 2.0 * l, t, kUnit) - phase * evaluate(s, x, t, kUnit)));
      const double x0 = s.node_position(t, kUnit);
      node = std::max({node, std::abs(evaluate(s, x0, t, kUnit)), std::abs(evaluate(s, x0 + l, t, kUnit))});
    }
  }
  return {periodicity < 1e-10 && node < 1e-10, fmt("periodicity %.2e, node %.2e", periodicity, node)};
}

double brute_force_argmin(const State& s, double t, double start, double l) {
  constexpr int n = 1000000;
  const double h = l / n;
  std::vector<double> rho(n);
  for (int i = 0; i < n; ++i) rho[static_cast<std::size_t>(i)] = std::norm(evaluate(s, start + i * h, t, kUnit));
  const auto best = static_cast<int>(std::min_element(rho.begin(), rho.end()) - rho.begin());
  const double fm = rho[static_cast<std::size_t>((best + n - 1) % n)];
  const double f0 = rho[static_cast<std::size_t>(best)];
  const double fp = rho[static_cast<std::size_t>((best + 1) % n)];
  const double denom = fm - 2.0 * f0 + fp;
  const double shift = denom > 0.0 ? 0.5 * (fm - fp) / denom : 0.0;
  return start + (best + shift) * h;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(13);
  double density_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ThreeWavePacketParams p{static_cast<int>(uniform(rng, -4.0, 5.0)), uniform(rng, 0.1, 2.5), uniform(rng, 1.0, 10.0),
                                  uniform(rng, -1.0, 1.0)};
    const double x = uniform(rng, p.origin, p.origin + p.length);
    const double t = uniform(rng, 0.0, 20.0);
    density_err = std::max(density_err, std::abs(packet_density_closed_form(p, x, t, kUnit) -
                                                 std::norm(evaluate(three_wave_packet(p), x, t, kUnit))));
  }
  double argmin_err = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double l = uniform(rng, 1.0, 10.0);
    const double origin = uniform(rng, -1.0, 1.0);
    const State s = pbox::testing::random_plane_wave_state(rng, 5, 5, l, origin);
    const double t = uniform(rng, 0.0, 5.0);
    const double x0 = density_minimum(s, t, kUnit).x0;
    argmin_err = std::max(argmin_err, circular_distance(x0, brute_force_argmin(s, t, origin, l), l) / l);
  }
  return {density_err <= 1e-12 && argmin_err <= 1e-9, fmt("density err %.2e, argmin err %.2e L", density_err, argmin_err)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"three-wave maxmin bound hbar/6", maxmin_packet},
      {"cut bound at L/2", cut_at_half_box},
      {"three-wave momentum spread", packet_dp},
      {"half-box elementary moments", elementary_states},
      {"max over time of L min density", maxmin_grid},
      {"plane-wave values", plane_wave_values},
      {"sine-state values", sine_state},
      {"prescription ordering chain", inequality_chain},
      {"boundary force", boundary_force_check},
      {"Ehrenfest relation", ehrenfest},
      {"Bloch periodicity and node persistence", bloch_structure},
      {"closed forms and argmin oracles", oracle_equivalence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s -- %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
