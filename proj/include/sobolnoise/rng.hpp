#pragma once

#include <array>
#include <cstdint>

namespace sobolnoise {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; used to derive child seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for replicate `index` of an experiment driven by `master_seed`.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Well-known stream ids. Every stream of one master seed is disjoint.
namespace streams {
inline constexpr std::uint64_t kBaseA = 0;
inline constexpr std::uint64_t kBaseB = 1;
inline constexpr std::uint64_t kNoiseFirstPass = 2;
inline constexpr std::uint64_t kNoiseReplicate = 3;
inline constexpr std::uint64_t kBootstrapBase = 4;
}  // namespace streams

/// Counter-based random stream identified by (master seed, stream id).
///
/// The key is the master seed, the upper 64 counter bits hold the stream id
/// and the lower 64 bits count blocks, so any stream can be regenerated or
/// split without touching the others.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform double in [lower, upper]; returns lower when lower == upper.
  double uniform(double lower, double upper);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  void refill();

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
};

}  // namespace sobolnoise
