#pragma once

#include <cstdint>

namespace ergolab {

// Counter-based generator (splitmix64 finalizer in counter mode).  A draw is
// a pure function of (seed, stream, counter), so replicas can be split across
// threads by stream id and still reproduce bit-for-bit in any schedule.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  // Uniform on (0, 1]; never returns 0, safe under log().
  double uniform();

  // Uniform on [0, 1).
  double uniform_co();

  // Standard normal via Box-Muller; pairs are cached.
  double normal();

  // Exponential with the given rate > 0.
  double exponential(double rate);

  // Unbiased integer in [0, bound), bound >= 1.
  std::uint64_t uniform_int(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Derived stream id for an indexed substream (replica splitting).
  static std::uint64_t substream(std::uint64_t stream, std::uint64_t index);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Stream ids: path noise and subsampling clocks never share draws.
namespace streams {
inline constexpr std::uint64_t path = 0;
inline constexpr std::uint64_t clocks = 1;
}  // namespace streams

}  // namespace ergolab
