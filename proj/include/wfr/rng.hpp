#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wfr {

// SplitMix64 step.  Used to derive well-separated sub-stream seeds from a
// master seed plus integer stream labels, so that every trial of an ensemble
// can be replayed in isolation and results do not depend on thread count.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic hash of (a, b, c) into a 64-bit seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
  std::uint64_t s = 0x243f6a8885a308d3ULL ^ a;
  s ^= splitmix64_next(s) + (b * 0x9e3779b97f4a7c15ULL + 0x452821e638d01377ULL);
  s ^= splitmix64_next(s) + (c * 0xc2b2ae3d27d4eb4fULL + 0x082efa98ec4e6c89ULL);
  return splitmix64_next(s);
}

// Uniform double in (0, 1].  Implemented directly on the engine output instead
// of std::uniform_real_distribution so the stream is pinned down by the
// standard-specified mt19937_64 sequence alone.
inline double uniform_unit(std::mt19937_64& engine) {
  return static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53;
}

// Uniform integer in [lo, hi].  Modulo bias is ~range/2^64, far below any
// statistical resolution used here.
inline std::int64_t uniform_index(std::mt19937_64& engine, std::int64_t lo,
                                  std::int64_t hi) {
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1ULL;
  return lo + static_cast<std::int64_t>(engine() % range);
}

// Standard-normal sampler: mt19937_64 + Box-Muller.  Avoids
// std::normal_distribution, whose draw sequence is implementation-defined.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_unit(engine_);
    const double u2 = uniform_unit(engine_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace wfr
