#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace survcop {

// Deterministic random stream. Wraps mt19937_64 but converts to doubles
// explicitly so sequences are bit-identical across standard libraries
// (uniform_real_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  // substream r of a root seed, independent per (seed, index)
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix(seed + 0x9E3779B97F4A7C15ULL * (index + 1)));
  }

  // uniform on (0, 1); never returns 0 or 1
  double uniform() {
    double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller (deterministic, no cached spare)
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // integer in [0, n)
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace survcop
