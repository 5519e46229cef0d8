#pragma once

#include <optional>

#include "pbox/state.hpp"

namespace pbox {

// Named states with closed-form results. These serve as oracles for the
// generic moment and bound machinery.

struct ThreeWavePacketParams {
  int n = 1;
  double b = 0.5;
  double length = 2.0 * kPi;
  double origin = 0.0;
};

/// Modes (n-1, b), (n, 1), (n+1, b) normalized by sqrt(1 + 2 b^2). b = 0 gives the single plane wave n.
PlaneWaveState three_wave_packet(const ThreeWavePacketParams& p);

/// Dimensionless time alpha = 2 pi hbar t / (m L^2), the variable in which
///   L rho = [(2b)^2 (cos 2 pi (x/L - n alpha) + cos(pi alpha) / (2b))^2 + 1 - cos^2(pi alpha)] / (1 + 2 b^2).
/// The density recurs when alpha advances by 2.
double packet_alpha(const ThreeWavePacketParams& p, double t, const Constants& c);
double packet_time_for_alpha(const ThreeWavePacketParams& p, double alpha, const Constants& c);

/// Closed-form density of the three-wave packet; requires b > 0.
double packet_density_closed_form(const ThreeWavePacketParams& p, double x, double t, const Constants& c);

struct PacketMinMaxmin {
  std::optional<double> scaled_min_density;  ///< L min_x rho at the requested time
  int branch = 0;                            ///< 1: |cos(pi alpha)| <= 2b, 2: otherwise
  double maxmin = 0.0;                       ///< max_t L min_x rho = 1 / (1 + 2 b^2)
  double bound = 0.0;                        ///< (hbar/2)(1 - maxmin)
};

/// Piecewise minimum of the closed-form density and its time maximum; requires b > 0.
PacketMinMaxmin packet_min_and_maxmin(const ThreeWavePacketParams& p, std::optional<double> t, const Constants& c);

enum class PairSign { plus, minus, none };

struct ElementaryParams {
  int n = 0;
  int k = 1;
  PairSign sign = PairSign::none;
  double length = 2.0 * kPi;
};

/// (n+k, 1/sqrt 2) and (n-k, +-1/sqrt 2) on the periodic box; k = 0 with plus/none is the plane wave n.
PlaneWaveState bloch_pair_state(const ElementaryParams& p);

/// Half-box elementary state: single sine mode k with Bloch momentum p_n = pi hbar n / L.
/// Equal to the textbook psi_{n,k} up to the constant phase i.
BlochSineState half_box_state(const ElementaryParams& p, const Constants& c);

struct ElementaryClosedForms {
  double mean_p = 0.0;
  double dp = 0.0;
  double dx = 0.0;
  double product = 0.0;
};

/// dp = k pi hbar / L, dx = (L / (2 sqrt 3)) sqrt(1 - 24 / (2 pi k)^2), product = dx dp.
ElementaryClosedForms elementary_closed_forms(const ElementaryParams& p, const Constants& c);

/// <x> and <x^2> of the half-box state on its moving window at time t.
double elementary_mean_x(const ElementaryParams& p, double t, const Constants& c);
double elementary_mean_x2(const ElementaryParams& p, double t, const Constants& c);

PlaneWaveState plane_wave(int n, const BoxDomain& domain);

/// sqrt(2/L) sin(2 pi x / L) on [0, L].
PlaneWaveState sine_test_state(double length);

}  // namespace pbox
