#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace chanent {

// Seed used by the CLI and the experiment drivers when none is given.
inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

// splitmix64 mixing step (Steele, Lea, Flood 2014).  Used to decorrelate
// substream ids; never used as the generator itself.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic substream id derived from a root seed and up to three stream
// coordinates (typically experiment id, trial index, role).  Every sampling
// site gets its own substream so trials are independent and insertion of new
// draws in one trial cannot shift any other trial.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a = 0,
                                    std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(seed ^ 0x6a09e667f3bcc909ull);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  return splitmix64(s ^ c);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  return std::mt19937_64(derive_seed(seed, a, b, c));
}

// Standard complex Gaussian: E z = 0, E |z|^2 = 1.
inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
  static constexpr double kScale = 0.70710678118654752440;  // 1/sqrt(2)
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {kScale * re, kScale * im};
}

}  // namespace chanent
