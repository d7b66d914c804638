#pragma once

#include <cstdint>
#include <random>

namespace eisenlab {

// Seeded generator with a fixed cross-platform mapping to [0,1).
// std::mt19937_64 output is specified bit-exactly by the standard; the
// division-free mapping below takes the top 53 bits, unlike
// std::uniform_real_distribution whose algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace eisenlab
