#pragma once

#include <array>
#include <cstdint>

namespace corrcov {

namespace detail {
// One Philox4x32 block with 10 rounds, as in Random123.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept;
}  // namespace detail

// Counter-based generator (Philox4x32-10).
//
// The 64-bit seed is the Philox key. The 128-bit counter is split into a
// 64-bit stream index (high half) and a 64-bit block index (low half), so two
// generators with the same seed and different stream indices walk disjoint
// counter ranges and never overlap.
//
// Normal deviates come from a 128-layer ziggurat driven by one 64-bit draw per
// attempt. The golden-value test in tests/test_sampling.cpp pins this stream.
class Prng {
 public:
  explicit Prng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() noexcept;
  // Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double standard_normal() noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  static constexpr int kBufferWords = 16;
  std::array<std::uint32_t, kBufferWords> buffer_{};
  int buffered_ = 0;
};

// Generator for stream k of a master seed.
inline Prng split(std::uint64_t master_seed, std::uint64_t k) noexcept {
  return Prng(master_seed, k);
}

// Stream index for trial `trial` within grid cell `cell`; trials must stay below 2^32.
inline std::uint64_t cell_stream(std::uint64_t cell, std::uint64_t trial) noexcept {
  return (cell << 32) | (trial & 0xffffffffULL);
}

inline double standard_normal(Prng& rng) noexcept { return rng.standard_normal(); }

}  // namespace corrcov
