#pragma once

#include <cstdint>
#include <random>

namespace gridslam {

// Seeded random stream used everywhere randomness enters the simulator.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The distributions are implemented here rather than taken from
// <random> because the standard leaves their algorithms unspecified, and
// rollouts must replay identically across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  // Mixes a base seed with an instance index (splitmix64 finalizer) so that
  // parallel environments get independent streams.
  static std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);

  // Standard normal deviate (Marsaglia polar method).
  double normal();
  double normal(double sigma) { return sigma == 0.0 ? 0.0 : sigma * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gridslam
