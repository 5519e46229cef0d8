#pragma once

#include <cmath>
#include <numbers>

#include "pbox/errors.hpp"

namespace pbox {

inline constexpr double kPi = std::numbers::pi;

/// Physical constants. Natural units (hbar = m = 1) unless overridden.
struct Constants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(std::isfinite(hbar) && hbar > 0.0)) throw DomainError("hbar must be positive and finite");
    if (!(std::isfinite(mass) && mass > 0.0)) throw DomainError("mass must be positive and finite");
  }
};

/// The base interval [origin, origin + length].
struct BoxDomain {
  double length = 1.0;
  double origin = 0.0;

  double end() const { return origin + length; }

  void validate() const {
    if (!(std::isfinite(length) && length > 0.0)) throw DomainError("box length must be positive and finite");
    if (!std::isfinite(origin)) throw DomainError("box origin must be finite");
  }
};

/// Reduces x into [start, start + period).
inline double wrap_into(double x, double start, double period) {
  double r = std::fmod(x - start, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return start + r;
}

}  // namespace pbox
