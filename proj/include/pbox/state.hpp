#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pbox/constants.hpp"
#include "pbox/quadrature.hpp"

namespace pbox {

using Complex = std::complex<double>;

/// Normalization tolerance enforced on construction.
inline constexpr double kNormTolerance = 1e-12;

struct PlaneWaveMode {
  int n = 0;
  Complex amplitude;
};

/// Superposition of periodic plane waves (1/sqrt(L)) exp(i 2 pi n x / L) on a
/// box of length L. Every basis mode is L-periodic, so the state is too.
class PlaneWaveState {
 public:
  /// Throws PreconditionError unless the modes are distinct, non-empty and
  /// sum |c_n|^2 = 1 within kNormTolerance.
  PlaneWaveState(BoxDomain domain, std::vector<PlaneWaveMode> modes);

  /// Rescales the amplitudes to unit norm; zero-amplitude modes are dropped.
  static PlaneWaveState normalized(BoxDomain domain, std::vector<PlaneWaveMode> modes);

  const BoxDomain& domain() const { return domain_; }
  double length() const { return domain_.length; }
  std::span<const PlaneWaveMode> modes() const { return modes_; }

  /// 2 pi n / L
  double wavenumber(int n) const { return 2.0 * kPi * n / domain_.length; }

 private:
  BoxDomain domain_;
  std::vector<PlaneWaveMode> modes_;
};

struct SineMode {
  int k = 1;
  Complex amplitude;
};

/// Bloch-momentum phase times a sine-series envelope:
///
///   psi(x, t) = exp(i pbar x / hbar - i pbar^2 t / (2 m hbar)) phi(x - (pbar/m) t, t)
///   phi(y, t) = sum_k c_k sqrt(2/L) exp(-i p_k^2 t / (2 m hbar)) sin(k pi y / L),  p_k = k pi hbar / L
///
/// The envelope lives on [0, L]; the full state lives on a circle of
/// circumference 2L with psi(x + 2L) = exp(2 i pbar L / hbar) psi(x).
class BlochSineState {
 public:
  BlochSineState(double length, double bloch_momentum, std::vector<SineMode> coeffs);
  static BlochSineState normalized(double length, double bloch_momentum, std::vector<SineMode> coeffs);

  BoxDomain domain() const { return BoxDomain{length_, 0.0}; }
  double length() const { return length_; }
  double bloch_momentum() const { return bloch_momentum_; }
  std::span<const SineMode> coeffs() const { return coeffs_; }
  int max_mode() const;

  /// k pi hbar / L
  double mode_momentum(int k, const Constants& c) const { return k * kPi * c.hbar / length_; }

  /// Position of the moving node (pbar/m) t; the physical window is [node, node + L].
  double node_position(double t, const Constants& c) const { return bloch_momentum_ / c.mass * t; }

 private:
  double length_;
  double bloch_momentum_;
  std::vector<SineMode> coeffs_;
};

using State = std::variant<PlaneWaveState, BlochSineState>;

double state_length(const State& s);

/// psi(x, t). Throws DomainError for non-finite x or t.
Complex evaluate(const PlaneWaveState& s, double x, double t, const Constants& c);
Complex evaluate(const BlochSineState& s, double x, double t, const Constants& c);
Complex evaluate(const State& s, double x, double t, const Constants& c);

/// d psi / dx, computed term by term.
Complex evaluate_gradient(const PlaneWaveState& s, double x, double t, const Constants& c);
Complex evaluate_gradient(const BlochSineState& s, double x, double t, const Constants& c);
Complex evaluate_gradient(const State& s, double x, double t, const Constants& c);

/// The envelope phi(y, t) of a Bloch-sine state and its y-derivative.
Complex envelope(const BlochSineState& s, double y, double t, const Constants& c);
Complex envelope_gradient(const BlochSineState& s, double y, double t, const Constants& c);

/// |psi(x, t)|^2
double density(const State& s, double x, double t, const Constants& c);

/// Density on the physical circle of circumference L. For plane-wave states
/// this is |psi|^2. For Bloch-sine states it is the density of the moving
/// window [node, node + L] repeated with period L, i.e. |phi((x - node) mod L, t)|^2.
double circle_density(const State& s, double x, double t, const Constants& c);
double circle_density_gradient(const State& s, double x, double t, const Constants& c);

/// Start of the reference window at time t: the box origin for plane-wave
/// states, the moving node for Bloch-sine states.
double reference_window_start(const State& s, double t, const Constants& c);

/// circle_density at `count` uniformly spaced points start + i * step.
std::vector<double> sample_circle_density(const State& s, double t, double start, double step, int count,
                                          const Constants& c);

/// A state frozen at one time. Mode phases are computed once, so repeated
/// evaluation (quadrature, grid scans) costs one rotation per mode.
class Snapshot {
 public:
  Snapshot(const State& s, double t, const Constants& c);

  double length() const { return length_; }
  double t() const { return t_; }
  bool is_bloch() const { return bloch_; }
  /// Node position for Bloch-sine states, the origin otherwise.
  double window_start() const { return start_; }

  double circle_density(double x) const;
  double circle_density_gradient(double x) const;
  /// Bloch-sine envelope phi(y, t) and its derivative for y in [0, L].
  Complex envelope(double y) const;
  Complex envelope_gradient(double y) const;

 private:
  void sums(double x, Complex* value, Complex* gradient) const;

  bool bloch_ = false;
  double length_ = 0.0;
  double t_ = 0.0;
  double start_ = 0.0;
  double base_wavenumber_ = 0.0;  ///< pi / L for sine modes, 2 pi / L for plane waves
  int min_index_ = 0;
  std::vector<int> index_;
  std::vector<Complex> amp_;    ///< normalized, time-phased amplitudes
  std::vector<Complex> dense_;  ///< amplitudes by index - min_index_ when the mode set is dense
};

// ---------------------------------------------------------------------------

using Profile = std::function<Complex(double)>;

/// Options for momentum and projection of sampled profiles.
struct ProfileOptions {
  QuadratureConfig quadrature{};
  int fd_grid_points = 4096;  ///< finite-difference step is L / fd_grid_points
  double norm_tolerance = 1e-8;
  double edge_tolerance = 1e-8;
};

/// Mean momentum  int_0^L (hbar / 2i) [psi* psi' - (psi')* psi] dx  of a profile
/// given on [0, L]. The derivative uses 4th-order central differences; the
/// profile must be evaluable slightly outside [0, L].
double mean_momentum(const Profile& profile, double length, const Constants& c, const ProfileOptions& opt = {});

/// Spectral route for states given as mode expansions, at time t.
double mean_momentum(const State& s, double t, const Constants& c);

struct SineProjectionOptions {
  std::optional<double> bloch_momentum;  ///< nullopt: take mean_momentum of the profile
  int modes = 256;
  double residual_threshold = 1e-6;
  ProfileOptions profile{};
};

struct SineProjection {
  BlochSineState state;
  double residual = 0.0;  ///< 1 - sum |c_k|^2 / ||profile||^2 before renormalization
};

/// Strips exp(i pbar x / hbar) from the profile and projects the remainder on
/// sqrt(2/L) sin(k pi x / L), k = 1..modes. Throws TruncationError when the
/// residual exceeds the threshold, PreconditionError when the profile does not
/// vanish at both ends.
SineProjection project_to_sine(const Profile& profile, double length, const Constants& c,
                               const SineProjectionOptions& opt = {});

/// Exact time period of the density (of the comoving envelope density for
/// Bloch-sine states).
double recurrence_period(const State& s, const Constants& c);

/// Uniformly sampled circle density on [start, start + width] including both ends.
struct GridDensity {
  double start = 0.0;
  double width = 0.0;
  double t = 0.0;
  std::vector<double> samples;

  double x(std::size_t i) const { return start + width * static_cast<double>(i) / (samples.size() - 1); }
  double trapezoid_integral() const;
};

GridDensity sample_grid_density(const State& s, double t, double start, int points, const Constants& c);

}  // namespace pbox
