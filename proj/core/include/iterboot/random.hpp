#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace iterboot {

/// Counter-based random stream (Philox4x32-10).
///
/// The 128-bit counter is split into four 32-bit words:
///   [block, lane, replicate, chain]
/// and the 64-bit key holds the master seed. Every (seed, replicate, chain,
/// lane) tuple therefore addresses a disjoint sequence of 2^32 blocks, and
/// the output never depends on which thread consumes the stream.
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random>
/// distributions directly.
class Stream {
 public:
  using result_type = std::uint64_t;

  Stream(std::uint64_t seed, std::uint32_t replicate, std::uint32_t chain, std::uint32_t lane = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in the open interval (0, 1) with 53 random bits.
  double uniform_open();

  /// Independent sub-stream on another lane. Only lane-0 streams may fork,
  /// and `lane` must be nonzero, so sub-streams never alias their parent.
  Stream fork(std::uint32_t lane) const;

  std::uint64_t seed() const noexcept;
  std::uint32_t replicate() const noexcept { return counter_[2]; }
  std::uint32_t chain() const noexcept { return counter_[3]; }
  std::uint32_t lane() const noexcept { return counter_[1]; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int position_ = 4;
  bool exhausted_ = false;
};

/// The raw Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Stream for (master_seed, replicate_index, chain_index). Injective for
/// indices below 2^32; identical output for identical tuples.
Stream derive_stream(std::uint64_t master_seed, std::uint64_t replicate_index,
                     std::uint64_t chain_index);

/// Bijective 64-bit finalizer (splitmix64), used to derive sub-seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace iterboot
