#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every output
// block is a pure function of (key, counter), so draws can be addressed
// directly instead of advanced sequentially.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace gplab {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Block operator()(Block counter) const {
    Key key = key_;
    for (int round = 0; round < 10; ++round) {
      counter = single_round(counter, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return counter;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Block single_round(const Block& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  Key key_;
};

/// Addressable stream of uniforms and normals: draw i of stream s under
/// (seed, tag_a, tag_b) never depends on how many other draws were made.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, std::uint32_t stream, std::uint32_t tag_a, std::uint32_t tag_b)
      : gen_(seed), stream_(stream), tag_a_(tag_a), tag_b_(tag_b) {}

  /// Two independent uniforms in [0, 1) from block `index`.
  std::array<double, 2> uniform_pair(std::uint32_t index) const {
    const auto block = gen_({index, stream_, tag_a_, tag_b_});
    return {to_unit(block[0], block[1]), to_unit(block[2], block[3])};
  }

  double uniform(std::uint32_t index) const { return uniform_pair(index)[0]; }

  /// Standard normal via Box-Muller on block `index`.
  double normal(std::uint32_t index) const {
    const auto [u1, u2] = uniform_pair(index);
    const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  Philox4x32 gen_;
  std::uint32_t stream_;
  std::uint32_t tag_a_;
  std::uint32_t tag_b_;
};

}  // namespace gplab
