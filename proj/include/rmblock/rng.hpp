#pragma once
#include <cmath>
#include <complex>
#include <cstdint>

namespace rmb {

// SplitMix64. Also used as the counter-based splitter for per-trial seeds.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t attempt = 0) {
  return splitmix64_mix(splitmix64_mix(seed ^ trial) + 0x9e3779b97f4a7c15ULL * (attempt + 1));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }
  // (0, 1]
  double uniform_open0() { return (double(next() >> 11) + 1.0) * 0x1.0p-53; }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  // Box-Muller; real and imaginary parts are independent standard normals.
  std::complex<double> normal_pair() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double t = 2.0 * M_PI * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  std::uint64_t state_;
};

}  // namespace rmb
