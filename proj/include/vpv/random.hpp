#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace vpv {

namespace detail {
// One Philox4x32-10 block: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);
}  // namespace detail

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// The 64-bit master seed is the key. The 128-bit counter is split into the
// substream index (high half) and a running block index (low half), so every
// (seed, substream) pair names an independent sequence and no state has to
// be shared between workers.
class RandomStream {
 public:
  using result_type = std::uint32_t;

  RandomStream(std::uint64_t seed, std::uint64_t substream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t substream() const { return substream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t substream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned used_ = 4;
};

// SplitMix64 finalizer; used to derive per-cell seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace vpv
