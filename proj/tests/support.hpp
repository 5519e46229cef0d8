#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "pbox/state.hpp"

namespace pbox::testing {

inline Complex random_amplitude(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

// Distinct indices drawn from [-span, span].
inline PlaneWaveState random_plane_wave_state(std::mt19937_64& rng, int modes, int span, double length,
                                              double origin = 0.0) {
  std::vector<int> pool;
  for (int n = -span; n <= span; ++n) pool.push_back(n);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<PlaneWaveMode> m;
  for (int i = 0; i < modes; ++i) m.push_back({pool[static_cast<std::size_t>(i)], random_amplitude(rng)});
  return PlaneWaveState::normalized({length, origin}, m);
}

inline BlochSineState random_bloch_state(std::mt19937_64& rng, int modes, int max_k, double length, double pbar) {
  std::vector<int> pool;
  for (int k = 1; k <= max_k; ++k) pool.push_back(k);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<SineMode> m;
  for (int i = 0; i < modes; ++i) m.push_back({pool[static_cast<std::size_t>(i)], random_amplitude(rng)});
  return BlochSineState::normalized(length, pbar, m);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace pbox::testing
