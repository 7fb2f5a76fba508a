#pragma once

#include <cstdint>

namespace cpt {

/// Counter-based random stream: draw k is a pure function of (seed, stream, k).
///
/// Uses the SplitMix64 output function on a key derived from seed and
/// stream, so any index can be generated independently and in any order.
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed) ^ (stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull))) {}

  std::uint64_t bits(std::uint64_t index) const {
    return mix(key_ + (index + 1) * 0x9E3779B97F4A7C15ull);
  }

  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t index) const {
    return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

}  // namespace cpt
