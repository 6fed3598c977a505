#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace rlens {

// Every random draw in the library comes from this SplitMix64 generator, so
// that seeds written into spec files and manifests reproduce bit-identically
// across compilers and standard libraries. Constants are the canonical
// SplitMix64 ones (Steele, Lea & Flood).
inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic sub-seed derivation: stream 0, 1, 2, ... of a base seed.
/// Used everywhere a run fans out (spec -> member -> episode -> repeat).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(base + kSplitMixGamma * (stream + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kSplitMixGamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], both inclusive (Lemire multiply-shift).
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t r = next_u64();
    const unsigned __int128 wide = static_cast<unsigned __int128>(r) * span;
    return lo + static_cast<int>(wide >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller; draws two uniforms per call so the
  /// generator state stays a single 64-bit word (checkpoint-friendly).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

 private:
  std::uint64_t state_;
};

}  // namespace rlens
