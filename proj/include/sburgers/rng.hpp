// Counter-based random streams. A stream is keyed by (seed, stream id); the
// n-th draw is a SplitMix64 finalizer applied to key + n * golden, so any
// (seed, mode) pair can be regenerated independently of every other one.
#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace sburgers {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

/// UniformRandomBitGenerator over one (seed, stream) pair.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng() = default;
  StreamRng(std::uint64_t seed, std::uint64_t stream) : key_(stream_key(seed, stream)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  double normal() { return normal_(*this); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(*this); }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_;
};

}  // namespace sburgers
