#pragma once

// Seedable random stream with fixed, documented transforms.
//
// The standard library's distribution objects (std::normal_distribution,
// std::uniform_real_distribution) are implementation-defined, which would
// break the byte-reproducibility contract across toolchains.  The stream
// below pins every transform explicitly:
//   * engine: std::mt19937_64 seeded with a single 64-bit value,
//   * uniform in [0,1): top 53 bits scaled by 2^-53,
//   * gaussian: Box-Muller on (0,1] x [0,1) uniforms, second value cached.
// Replicate streams derive their seeds as base_seed XOR splitmix64(index+1),
// so each replicate is reproducible in isolation from (base_seed, index).

#include <cmath>
#include <cstdint>
#include <random>

namespace sgdlab::rng {

// SplitMix64 finalizer; used to decorrelate replicate seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t index) {
  return base_seed ^ splitmix64(index + 1);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller; one spare value cached per pair.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sgdlab::rng
