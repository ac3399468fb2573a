#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace mtaylor {

/// Reproducible source of uniform and standard normal variates.
///
/// Engine: std::mt19937_64 seeded with a single 64-bit value (bit-exact by
/// the C++ standard). Sub-streams are seeded with SplitMix64 mixes of
/// (seed, index), so per-sample streams do not depend on execution order.
/// Uniforms take the top 53 bits of one engine output mapped to the open
/// interval (0, 1). Normals use the Box-Muller transform on a pair of
/// uniforms, returning the cosine branch first and caching the sine branch.
class RandomStream {
 public:
  static constexpr std::string_view kAlgorithm =
      "mt19937_64/splitmix64-substreams/box-muller";

  explicit RandomStream(std::uint64_t seed);

  /// Independent stream for `index`; does not advance this stream.
  RandomStream substream(std::uint64_t index) const;
  RandomStream substream(std::uint64_t a, std::uint64_t b) const;

  double uniform();
  double normal();

  std::uint64_t seed() const noexcept { return seed_; }
  /// Number of engine outputs consumed so far.
  std::uint64_t position() const noexcept { return position_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t position_ = 0;
  std::optional<double> spare_normal_;
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace mtaylor
