#pragma once

#include <array>
#include <cstdint>

namespace swapdrift {

// Stream tags for substream derivation. Values are part of the reproducibility
// contract: changing one changes every seeded result that uses it.
enum class Stream : std::uint64_t {
  drift_step = 0x5354455000000001ULL,
  swap_sample = 0x5357415000000002ULL,
  separation = 0x5345500000000003ULL,
  replicate = 0x5245500000000004ULL,
  state_sample = 0x5354410000000005ULL,
};

/// xoshiro256** generator keyed by (seed, stream, index).
///
/// Key derivation: h = mix(seed); h = mix(h ^ stream); h = mix(h ^ index),
/// where mix is the SplitMix64 finalizer. The four state words are the next
/// four outputs of a SplitMix64 sequence started at h. Uniform doubles take
/// the top 53 bits; normals use the Box-Muller transform (cosine branch
/// first, sine branch cached for the next call).
///
/// Because every substream is a pure function of its key, any schedule that
/// visits the same keys produces the same numbers, serial or parallel.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t index = 0);
  Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
      : Rng(seed, static_cast<std::uint64_t>(stream), index) {}

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();

  /// Standard normal.
  double normal();

  /// Key for a child substream, usable as the seed of another Rng.
  static std::uint64_t derive(std::uint64_t seed, Stream stream, std::uint64_t index);

 private:
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace swapdrift
