#pragma once

#include <cstdint>
#include <random>

namespace skilltask {

// Seeded stream with platform-independent output. The engine is
// std::mt19937_64 (fully specified by the standard); the real-valued
// transforms are written out here because the std distributions are
// implementation-defined and would break byte-level reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : engine_(key) {}

  // Stream keyed by (seed, stream, counter). Streams with different keys are
  // independent of each other and of the order in which they are created.
  static Rng keyed(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  // Standard normal via Box-Muller; consumes two uniforms per draw.
  double normal();
  double lognormal(double sigma);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stream identifiers.
namespace streams {
inline constexpr std::uint64_t scenario = 0;
inline constexpr std::uint64_t shock = 1;
inline constexpr std::uint64_t init = 2;
inline constexpr std::uint64_t trials = 3;
}  // namespace streams

}  // namespace skilltask
