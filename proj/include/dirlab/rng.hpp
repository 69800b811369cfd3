#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace dirlab::rng {

// Counter-based generator: every draw is a pure function of (seed, counter).
// Sample i can therefore be produced out of order, and concurrent loops stay
// schedule-independent as long as each job derives its values from (seed, i).

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t ctr) {
  // splitmix64 finalizer on the counter, keyed by the seed
  std::uint64_t z = seed + (ctr + 1) * kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Disjoint substream for a named purpose (dual sampling, MC, sign trials, ...).
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t label) {
  return mix(seed ^ 0xa5a5a5a55a5a5a5aull, label);
}

inline double u01(std::uint64_t seed, std::uint64_t ctr) {
  return static_cast<double>(mix(seed, ctr) >> 11) * 0x1.0p-53;
}

// uniform on [0, 2*pi)
inline double angle(std::uint64_t seed, std::uint64_t ctr) {
  return 2.0 * M_PI * u01(seed, ctr);
}

inline double sign(std::uint64_t seed, std::uint64_t ctr) {
  return (mix(seed, ctr) & 1ull) ? 1.0 : -1.0;
}

// standard complex Gaussian (components N(0,1)), Box-Muller on counters 2i, 2i+1
inline std::complex<double> gaussian(std::uint64_t seed, std::uint64_t ctr) {
  double u1 = u01(seed, 2 * ctr);
  double u2 = u01(seed, 2 * ctr + 1);
  if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

} // namespace dirlab::rng
