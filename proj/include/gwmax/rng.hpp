#pragma once

#include <cstdint>
#include <limits>

namespace gwmax {

/// SplitMix64 generator. One 64-bit word of state, so a fresh stream per simulated tree
/// costs nothing to set up.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGamma;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

 private:
  std::uint64_t state_;
};

/// Stream `index` of the family keyed by `seed`. Streams start 2^32 steps apart in the
/// SplitMix64 sequence, so they are disjoint for up to 2^32 draws each and 2^32 streams.
inline SplitMix64 make_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t base = SplitMix64::mix(seed ^ 0x5DEECE66Dull);
  return SplitMix64(base + (index << 32) * SplitMix64::kGamma);
}

/// Uniform double in (0, 1] with 53 random bits.
template <class Rng>
double uniform_open_closed(Rng& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

}  // namespace gwmax
