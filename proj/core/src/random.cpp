#include "iterboot/random.hpp"

#include <stdexcept>

namespace iterboot {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Stream::Stream(std::uint64_t seed, std::uint32_t replicate, std::uint32_t chain, std::uint32_t lane)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, lane, replicate, chain} {}

void Stream::refill() {
  if (exhausted_) throw std::overflow_error("Stream: block counter exhausted");
  block_ = philox4x32_10(counter_, key_);
  if (++counter_[0] == 0) exhausted_ = true;
  position_ = 0;
}

Stream::result_type Stream::operator()() {
  if (position_ >= 4) refill();
  const std::uint64_t lo = block_[position_];
  const std::uint64_t hi = block_[position_ + 1];
  position_ += 2;
  return (hi << 32) | lo;
}

double Stream::uniform_open() {
  // (k + 0.5) / 2^53, k in [0, 2^53)
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

Stream Stream::fork(std::uint32_t lane) const {
  if (counter_[1] != 0) throw std::logic_error("Stream::fork: only lane-0 streams can fork");
  if (lane == 0) throw std::invalid_argument("Stream::fork: lane must be nonzero");
  return Stream(seed(), counter_[2], counter_[3], lane);
}

std::uint64_t Stream::seed() const noexcept {
  return (static_cast<std::uint64_t>(key_[1]) << 32) | key_[0];
}

Stream derive_stream(std::uint64_t master_seed, std::uint64_t replicate_index, std::uint64_t chain_index) {
  if (replicate_index > 0xFFFFFFFFull || chain_index > 0xFFFFFFFFull)
    throw std::out_of_range("derive_stream: indices must be below 2^32");
  return Stream(master_seed, static_cast<std::uint32_t>(replicate_index),
                static_cast<std::uint32_t>(chain_index));
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace iterboot
