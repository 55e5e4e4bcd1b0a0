#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hvqm {

// SplitMix64 finalizer. Used only to turn (master seed, stream index) into a
// well-mixed engine seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One deterministic random stream. Stream k of a master seed is decorrelated
// from stream j != k, and the mapping (master, stream) -> engine seed is
// fixed, so sharded runs are bit-reproducible for a fixed worker count.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the
// standard. The uniform and normal draws below are deliberately implemented
// here instead of via std::*_distribution, whose output is
// implementation-defined and would break bit-level reproducibility.
class SeedStream {
 public:
  explicit SeedStream(std::uint64_t master, std::uint64_t stream = 0)
      : engine_(splitmix64(splitmix64(master) ^
                           (stream + 1) * 0x9e3779b97f4a7c15ULL)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]; never 0, so log(u) is always finite.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
  }

  // Standard normal, Box-Muller cosine branch. Two uniforms per draw, no
  // cached spare: the draw sequence is a pure function of the engine state.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Fair sign: +1 or -1.
  double sign() { return (engine_() & 1ULL) ? 1.0 : -1.0; }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925287;
  std::mt19937_64 engine_;
};

}  // namespace hvqm
