#include "pbox/density_series.hpp"

#include <cmath>
#include <array>
#include <map>

namespace pbox {

namespace {

// int_{u0}^{u1} u^m exp(i omega u) du for m = 0, 1, 2.
std::array<Complex, 3> power_exp_integrals(double omega, double u0, double u1) {
  if (omega == 0.0) {
    return {Complex(u1 - u0), Complex((u1 * u1 - u0 * u0) / 2.0), Complex((u1 * u1 * u1 - u0 * u0 * u0) / 3.0)};
  }
  const Complex i(0.0, 1.0);
  const double w2 = omega * omega;
  auto anti = [&](double u) {
    const Complex e = std::polar(1.0, omega * u);
    return std::array<Complex, 3>{e / (i * omega), e * (u / (i * omega) + 1.0 / w2),
                                  e * (u * u / (i * omega) + 2.0 * u / w2 - 2.0 / (i * omega * w2))};
  };
  const auto hi = anti(u1);
  const auto lo = anti(u0);
  return {hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
}

}  // namespace

DensitySeries DensitySeries::of(const State& s, double t, const Constants& c) {
  DensitySeries out;
  out.period_ = state_length(s);
  out.base_ = reference_window_start(s, t, c);

  if (const auto* p = std::get_if<PlaneWaveState>(&s)) {
    // rho = (1/L) sum_{a,b} c_a conj(c_b) e^{i (kappa_a - kappa_b) u} e^{-i (E_a - E_b) t / hbar} with u measured
    // from the box origin; collect by index difference q >= 0.
    const double l = p->length();
    std::map<int, Complex> by_q;
    for (const auto& ma : p->modes()) {
      for (const auto& mb : p->modes()) {
        const int q = ma.n - mb.n;
        if (q < 0) continue;
        const double ka = p->wavenumber(ma.n);
        const double kb = p->wavenumber(mb.n);
        const double phase = (ka - kb) * out.base_ - c.hbar * (ka * ka - kb * kb) * t / (2.0 * c.mass);
        const Complex term = ma.amplitude * std::conj(mb.amplitude) * std::polar(1.0 / l, phase);
        by_q[q] += q == 0 ? term : 2.0 * term;
      }
    }
    for (const auto& [q, coef] : by_q) out.terms_.push_back({2.0 * kPi * q / l, coef});
    return out;
  }

  // |phi|^2 = sum_{j,k} Re(conj(a_j) a_k) (1/L) [cos((j-k) theta) - cos((j+k) theta)], theta = pi y / L.
  const auto& b = std::get<BlochSineState>(s);
  const double l = b.length();
  std::map<int, double> by_q;
  std::vector<Complex> a;
  std::vector<int> ks;
  for (const auto& m : b.coeffs()) {
    const double kappa = m.k * kPi / l;
    a.push_back(m.amplitude * std::polar(1.0, -c.hbar * kappa * kappa * t / (2.0 * c.mass)));
    ks.push_back(m.k);
  }
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double w = std::real(std::conj(a[j]) * a[k]) / l;
      by_q[std::abs(ks[j] - ks[k])] += w;
      by_q[ks[j] + ks[k]] -= w;
    }
  }
  for (const auto& [q, coef] : by_q) out.terms_.push_back({q * kPi / l, Complex(coef)});
  return out;
}

double DensitySeries::value(double x) const {
  const double u = wrap_into(x, base_, period_) - base_;
  double sum = 0.0;
  for (const auto& term : terms_) sum += std::real(term.coef * std::polar(1.0, term.omega * u));
  return sum;
}

double DensitySeries::centered_moment(int m, double a, double b, double center) const {
  if (m < 0 || m > 2) throw PreconditionError("centered_moment supports m = 0, 1, 2");
  if (b < a || b - a > period_ * (1.0 + 1e-12)) throw PreconditionError("moment interval must lie within one period");

  auto piece = [&](double u0, double u1, double shift) {
    // x - center = u + d on this piece
    const double d = base_ + shift - center;
    double total = 0.0;
    for (const auto& term : terms_) {
      const auto in = power_exp_integrals(term.omega, u0, u1);
      Complex v;
      switch (m) {
        case 0: v = in[0]; break;
        case 1: v = in[1] + d * in[0]; break;
        default: v = in[2] + 2.0 * d * in[1] + d * d * in[0]; break;
      }
      total += std::real(term.coef * v);
    }
    return total;
  };

  const double a_wrapped = wrap_into(a, base_, period_);
  const double shift = a - a_wrapped;
  const double u0 = a_wrapped - base_;
  const double u1 = u0 + (b - a);
  if (u1 <= period_) return piece(u0, u1, shift);
  return piece(u0, period_, shift) + piece(0.0, u1 - period_, shift + period_);
}

}  // namespace pbox
