#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace v2x {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic derivation of independent sub-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= salt + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return splitmix64(s);
}

// mt19937_64 with hand-rolled variate transforms. std::uniform_real_distribution
// and friends are not bit-stable across standard libraries; these are.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unit-mean exponential (Rayleigh fading power)
  double exponential() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -std::log(u);
  }

  // uniform over a disk centered at (cx, cy); two draws regardless of radius
  std::array<double, 2> disk(double radius, double cx, double cy) {
    double r = radius * std::sqrt(uniform());
    double theta = 2.0 * 3.141592653589793238462643383279502884 * uniform();
    return {cx + r * std::cos(theta), cy + r * std::sin(theta)};
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace v2x
