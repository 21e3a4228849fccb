#pragma once

#include <cmath>
#include <cstdint>

namespace fracfilt {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based draws: the value at (seed, stream, i) never depends on what
// was drawn before it, so results are reproducible under any evaluation
// order or thread partitioning.
inline std::uint64_t mix3(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ i);
}

// Uniform in [0, 1).
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
  return static_cast<double>(mix3(seed, stream, i) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes draw indices 2i and 2i+1.
inline double normal01(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
  const double u1 =
      (static_cast<double>(mix3(seed, stream, 2 * i) >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01(seed, stream, 2 * i + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Sequential convenience over the counter-based draws.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  double uniform() { return uniform01(seed_, stream_, n_++); }
  double normal() { return normal01(seed_, stream_, n_++); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t n_ = 0;
};

} // namespace fracfilt
