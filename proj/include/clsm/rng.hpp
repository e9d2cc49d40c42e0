#pragma once

#include <cmath>
#include <cstdint>

namespace clsm {

// Deterministic stream generator (xorshift-multiply splitmix64 core).
// Used everywhere instead of std distributions so that identical seeds
// give identical results on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via Box-Muller. Exactly two draws per call (u1 floored
  // away from zero instead of rejection-sampled) so call counts stay fixed.
  double normal() {
    const double u1 = std::max(next_double(), 0x1.0p-53);
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::uint64_t state_;
};

// Derives an independent substream seed, e.g. one per specialized model.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng r(seed ^ (0xA0761D6478BD642Full * (stream + 1)));
  return r.next_u64();
}

}  // namespace clsm
