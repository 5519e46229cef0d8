#include "pbox/catalog.hpp"

#include <cmath>

namespace pbox {

PlaneWaveState three_wave_packet(const ThreeWavePacketParams& p) {
  if (!(p.b >= 0.0) || !std::isfinite(p.b)) throw DomainError("three-wave packet needs b >= 0");
  const BoxDomain domain{p.length, p.origin};
  if (p.b == 0.0) return PlaneWaveState(domain, {{p.n, 1.0}});
  const double s = 1.0 / std::sqrt(1.0 + 2.0 * p.b * p.b);
  return PlaneWaveState(domain, {{p.n - 1, p.b * s}, {p.n, s}, {p.n + 1, p.b * s}});
}

double packet_alpha(const ThreeWavePacketParams& p, double t, const Constants& c) {
  return 2.0 * kPi * c.hbar * t / (c.mass * p.length * p.length);
}

double packet_time_for_alpha(const ThreeWavePacketParams& p, double alpha, const Constants& c) {
  return alpha * c.mass * p.length * p.length / (2.0 * kPi * c.hbar);
}

double packet_density_closed_form(const ThreeWavePacketParams& p, double x, double t, const Constants& c) {
  if (!(p.b > 0.0)) throw PreconditionError("closed-form packet density needs b > 0");
  const double alpha = packet_alpha(p, t, c);
  const double cos_pa = std::cos(kPi * alpha);
  const double shifted = std::cos(2.0 * kPi * (x / p.length - p.n * alpha)) + cos_pa / (2.0 * p.b);
  return (4.0 * p.b * p.b * shifted * shifted + 1.0 - cos_pa * cos_pa) / ((1.0 + 2.0 * p.b * p.b) * p.length);
}

PacketMinMaxmin packet_min_and_maxmin(const ThreeWavePacketParams& p, std::optional<double> t, const Constants& c) {
  if (!(p.b > 0.0)) throw PreconditionError("closed-form packet minimum needs b > 0");
  const double norm = 1.0 + 2.0 * p.b * p.b;
  PacketMinMaxmin out;
  out.maxmin = 1.0 / norm;
  out.bound = 0.5 * c.hbar * (1.0 - out.maxmin);
  if (t) {
    const double cos_pa = std::cos(kPi * packet_alpha(p, *t, c));
    const double ratio = std::abs(cos_pa / (2.0 * p.b));
    if (ratio <= 1.0) {
      out.branch = 1;
      out.scaled_min_density = (1.0 - cos_pa * cos_pa) / norm;
    } else {
      // |cos| <= 1 bounds the ratio by 1/(2b), so this is the only other case.
      out.branch = 2;
      const double gap = 1.0 - ratio;
      out.scaled_min_density = (4.0 * p.b * p.b * gap * gap + 1.0 - cos_pa * cos_pa) / norm;
    }
  }
  return out;
}

PlaneWaveState bloch_pair_state(const ElementaryParams& p) {
  const BoxDomain domain{p.length, 0.0};
  if (p.k < 0) throw PreconditionError("bloch pair needs k >= 0");
  if (p.k == 0) {
    if (p.sign == PairSign::minus) throw PreconditionError("k = 0 with the minus sign is the empty state");
    return PlaneWaveState(domain, {{p.n, 1.0}});
  }
  if (p.sign == PairSign::none) throw PreconditionError("bloch pair with k >= 1 needs a sign");
  const double a = 1.0 / std::sqrt(2.0);
  return PlaneWaveState(domain, {{p.n + p.k, a}, {p.n - p.k, p.sign == PairSign::plus ? a : -a}});
}

BlochSineState half_box_state(const ElementaryParams& p, const Constants& c) {
  if (p.k < 1) throw PreconditionError("half-box state needs k >= 1");
  return BlochSineState(p.length, kPi * c.hbar * p.n / p.length, {{p.k, 1.0}});
}

ElementaryClosedForms elementary_closed_forms(const ElementaryParams& p, const Constants& c) {
  if (p.k < 1) throw PreconditionError("elementary closed forms need k >= 1");
  const double l = p.length;
  const double two_pi_k = 2.0 * kPi * p.k;
  ElementaryClosedForms out;
  out.mean_p = kPi * c.hbar * p.n / l;
  out.dp = p.k * kPi * c.hbar / l;
  out.dx = l / (2.0 * std::sqrt(3.0)) * std::sqrt(1.0 - 24.0 / (two_pi_k * two_pi_k));
  out.product = kPi * c.hbar / (2.0 * std::sqrt(3.0)) *
                std::sqrt(double(p.k) * p.k - 24.0 / (4.0 * kPi * kPi));
  return out;
}

double elementary_mean_x(const ElementaryParams& p, double t, const Constants& c) {
  const double shift = kPi * c.hbar * p.n / p.length / c.mass * t;
  return p.length / 2.0 + shift;
}

double elementary_mean_x2(const ElementaryParams& p, double t, const Constants& c) {
  const double l = p.length;
  const double shift = kPi * c.hbar * p.n / l / c.mass * t;
  const double two_pi_k = 2.0 * kPi * p.k;
  return l * l / 3.0 - 2.0 * l * l / (two_pi_k * two_pi_k) + l * shift + shift * shift;
}

PlaneWaveState plane_wave(int n, const BoxDomain& domain) { return PlaneWaveState(domain, {{n, 1.0}}); }

PlaneWaveState sine_test_state(double length) {
  const double a = 1.0 / std::sqrt(2.0);
  return PlaneWaveState(BoxDomain{length, 0.0}, {{1, Complex(0.0, -a)}, {-1, Complex(0.0, a)}});
}

}  // namespace pbox
