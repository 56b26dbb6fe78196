#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace gerd {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3", SC 2011).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

// Independent sub-streams of one recording. Each purpose draws from its own
// counter space so that, e.g., enabling event noise never perturbs the
// trajectory.
enum class StreamPurpose : std::uint32_t {
  Trajectory = 1,
  StartState = 2,
  IntegratorInit = 3,
  ShapeNoise = 4,
  EventNoise = 5,
  BackgroundNoise = 6,
  User = 0x100,
};

// Sequential view over the Philox counter space for one (seed, stream,
// purpose) triple. Cheap to copy; copies replay the same values.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamPurpose purpose, std::uint32_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        purpose_(static_cast<std::uint32_t>(purpose)),
        stream_(stream) {}

  std::uint32_t next_u32() {
    if (lane_ == 4) {
      block_ = Philox4x32::generate(
          {static_cast<std::uint32_t>(block_index_), static_cast<std::uint32_t>(block_index_ >> 32),
           stream_, purpose_},
          key_);
      ++block_index_;
      lane_ = 0;
    }
    return block_[lane_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  // Box-Muller; one normal per call, the sine branch is discarded.
  double normal(double mean = 0.0, double stddev = 1.0) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t blocks_consumed() const { return block_index_; }

 private:
  Philox4x32::Key key_;
  std::uint32_t purpose_;
  std::uint32_t stream_;
  std::uint64_t block_index_ = 0;
  Philox4x32::Counter block_{};
  int lane_ = 4;
};

}  // namespace gerd
