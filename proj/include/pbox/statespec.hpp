#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pbox/catalog.hpp"
#include "pbox/state.hpp"

namespace pbox {

/// Declarative state description read from a flat `key = value` document.
/// The schema is documented in README.md. Unknown keys, keys that do not apply
/// to the chosen kind, and duplicate keys are rejected.
struct StateSpec {
  std::string kind;  ///< plane_waves, plane_wave, bloch_sine, three_wave_packet, elementary, half_box,
                     ///< bloch_pair, sine_test, profile

  std::optional<double> length;
  std::optional<double> x_lo;
  std::optional<double> hbar;
  std::optional<double> mass;

  std::vector<PlaneWaveMode> modes;  ///< plane_waves
  std::vector<SineMode> coeffs;      ///< bloch_sine
  bool normalize = false;

  std::optional<double> b;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<PairSign> sign;
  std::optional<double> p_bar;  ///< nullopt with p_bar_auto for "auto"
  bool p_bar_auto = false;

  std::string profile;  ///< triangle, sine, gaussian, ramp
  std::optional<double> center;
  std::optional<double> width;
  std::optional<double> momentum;
  std::optional<double> w_left;
  std::optional<double> w_right;
  std::optional<int> mode;
  std::optional<int> truncation;  ///< K
  std::optional<double> threshold;
};

StateSpec parse_state_spec(std::istream& in);
StateSpec parse_state_spec_text(const std::string& text);
StateSpec load_state_spec(const std::string& path);

struct BuiltState {
  State state;
  Constants constants;
  double projection_residual = 0.0;  ///< profile kind only
};

BuiltState build_state(const StateSpec& spec);

/// The profile described by a `profile` spec, normalized on [0, L].
Profile build_profile(const StateSpec& spec, const Constants& c);

/// Keys accepted for a kind (including the common ones).
std::vector<std::string> allowed_keys(const std::string& kind);

}  // namespace pbox
