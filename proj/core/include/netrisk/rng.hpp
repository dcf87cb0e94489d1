#pragma once

#include <cstdint>

namespace netrisk {

// Counter-based generator: every draw is a hash of (key, counter), with the
// key derived from (seed, stream, substream). Streams are independent of
// scheduling, so Monte Carlo merges are partition-invariant and bit-exact.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0)
      : key_(derive_key(seed, stream, substream)) {}

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in the open interval (0, 1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Marsaglia polar rejection; pairs are cached.
  double next_normal();

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

 private:
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t substream) {
    std::uint64_t k = mix(seed + 0x9E3779B97F4A7C15ULL);
    k = mix(k ^ (stream + 0xC2B2AE3D27D4EB4FULL));
    k = mix(k ^ (substream + 0x165667B19E3779F9ULL));
    return k;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace netrisk
