#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace kmu {

/// SplitMix64 finalizer. Bijective 64-bit mixing used to derive sub-streams.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Identifies an independent random stream by a 64-bit key.
///
/// Streams form a tree: `split(i)` derives the i-th child deterministically,
/// so every consumer (restart, bootstrap draw, replicate) owns its stream and
/// results do not depend on scheduling order.
class RngStream {
 public:
  constexpr explicit RngStream(std::uint64_t seed) noexcept : key_(seed) {}

  constexpr RngStream split(std::uint64_t index) const noexcept {
    return RngStream(mix64(key_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
  }

  constexpr std::uint64_t key() const noexcept { return key_; }

  friend constexpr bool operator==(RngStream, RngStream) = default;

 private:
  std::uint64_t key_;
};

/// Generator bound to one stream. Distribution transforms are implemented
/// here rather than with <random> distributions so that draws are identical
/// across standard library implementations.
class Rng {
 public:
  explicit Rng(RngStream stream) : engine_(mix64(stream.key())) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n). Lemire's multiply-shift with rejection.
  std::size_t below(std::size_t n);

  /// Standard normal (Marsaglia polar method).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace kmu
