#include <cmath>
#include <ostream>

#include "pbox/bounds.hpp"
#include "pbox/catalog.hpp"
#include "pbox/cli.hpp"
#include "pbox/moments.hpp"

namespace pbox::cli {

namespace {

ReplicationRow row(std::string id, double closed, double computed, double tolerance) {
  ReplicationRow r;
  r.id = std::move(id);
  r.closed = closed;
  r.computed = computed;
  r.abs_diff = std::abs(closed - computed);
  r.tolerance = tolerance;
  r.pass = std::isfinite(computed) && r.abs_diff <= tolerance;
  return r;
}

std::string label(const char* stem, double v) {
  return std::string(stem) + format_double(v);
}

}  // namespace

std::vector<ReplicationRow> replication_table() {
  const Constants c;
  const double hbar = c.hbar;
  const double l = 2.0 * kPi;
  std::vector<ReplicationRow> rows;

  for (double b : {0.25, 0.5, 1.0, 2.0}) {
    const ThreeWavePacketParams p{1, b, l, 0.0};
    const State s = three_wave_packet(p);
    const double dp = std::sqrt(2.0 * b * b / (1.0 + 2.0 * b * b)) * 2.0 * kPi * hbar / l;
    rows.push_back(row(label("packet-dp-b", b), dp, std::sqrt(p_moments(s, 0.37, c).variance()), kAnalyticTolerance));
    const double cut = 0.5 * hbar * std::abs(1.0 - (1.0 - 2.0 * b) * (1.0 - 2.0 * b) / (1.0 + 2.0 * b * b));
    rows.push_back(row(label("packet-cut-bound-b", b), cut, cut_bound(s, 0.0, 0.5 * l, c).value, kAnalyticTolerance));
    const double maxmin = 0.5 * hbar * (1.0 - 1.0 / (1.0 + 2.0 * b * b));
    rows.push_back(row(label("packet-maxmin-bound-b", b), maxmin, maxmin_bound(s, c).value, kQuadratureTolerance));
    rows.push_back(row(label("packet-maxmin-closed-b", b), maxmin, packet_min_and_maxmin(p, std::nullopt, c).bound,
                       kAnalyticTolerance));
  }

  {
    const ThreeWavePacketParams p{1, 0.5, l, 0.0};
    const State s = three_wave_packet(p);
    for (double alpha : {0.25, 0.5, 1.0}) {
      const double t = packet_time_for_alpha(p, alpha, c);
      rows.push_back(row(label("packet-min-density-alpha", alpha), *packet_min_and_maxmin(p, t, c).scaled_min_density,
                         density_minimum(s, t, c).scaled, kQuadratureTolerance));
    }
    const auto judge = judge_minimize(s, 0.0, c);
    rows.push_back(row("packet-judge-bound", 0.5 * hbar, judge.bound, kQuadratureTolerance));
    const double dxg = l * std::sqrt((1.0 / 8.0 - 15.0 / (16.0 * kPi * kPi)) / 1.5);
    rows.push_back(row("packet-judge-dx", dxg, judge.dx_gamma, kQuadratureTolerance));
    const auto mm = maxmin_bound(s, c);
    rows.push_back(row("packet-maxmin-satisfied", 1.0, mm.satisfied ? 1.0 : 0.0, 0.0));
  }

  for (int k = 1; k <= 8; ++k) {
    const ElementaryParams p{4, k, PairSign::none, l};
    const State s = half_box_state(p, c);
    const auto cf = elementary_closed_forms(p, c);
    const auto r = uncertainty_report(s, 1.0, WindowRule::moving_node, BoundKind::min_density, c);
    const std::string k_label = std::to_string(k);
    rows.push_back(row("elementary-mean-p-k" + k_label, cf.mean_p, r.mean_p, kAnalyticTolerance));
    rows.push_back(row("elementary-dp-k" + k_label, cf.dp, r.dp, kAnalyticTolerance));
    rows.push_back(row("elementary-dx-k" + k_label, cf.dx, r.dx, kQuadratureTolerance));
    rows.push_back(row("elementary-product-k" + k_label, cf.product, r.product, kQuadratureTolerance));
    if (k == 1) {
      rows.push_back(row("elementary-product-k1-value", 0.567862 * hbar, r.product, 1e-6));
      rows.push_back(row("elementary-min-density-bound", 0.5 * hbar, r.bound_value, kAnalyticTolerance));
    }
  }

  {
    const State s = plane_wave(3, {l, 0.0});
    const auto r = uncertainty_report(s, 0.5, WindowRule::base, BoundKind::min_density, c);
    rows.push_back(row("planewave-dx", l / std::sqrt(12.0), r.dx, kQuadratureTolerance));
    rows.push_back(row("planewave-dp", 0.0, r.dp, kAnalyticTolerance));
    rows.push_back(row("planewave-min-density-bound", 0.0, r.bound_value, kAnalyticTolerance));
    rows.push_back(row("planewave-judge-bound", 0.0, judge_minimize(s, 0.5, c).bound, kAnalyticTolerance));
  }

  {
    const State s = sine_test_state(l);
    rows.push_back(row("sine-dp", 2.0 * kPi * hbar / l, std::sqrt(p_moments(s, 0.0, c).variance()),
                       kAnalyticTolerance));
    const auto m = trig_moments(s, 0.0, c);
    rows.push_back(row("sine-trig-spread", std::sqrt(3.0) * l / 4.0,
                       0.5 * l * std::sqrt(m.mean_sin2 - m.mean_sin * m.mean_sin), kQuadratureTolerance));
  }
  return rows;
}

void write_replication_csv(std::ostream& out, const std::vector<ReplicationRow>& rows) {
  out << "id,closed,computed,abs_diff,tolerance,result\n";
  for (const auto& r : rows)
    out << r.id << ',' << format_double(r.closed) << ',' << format_double(r.computed) << ','
        << format_double(r.abs_diff) << ',' << format_double(r.tolerance) << ',' << (r.pass ? "pass" : "fail")
        << '\n';
}

}  // namespace pbox::cli
