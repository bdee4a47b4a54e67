#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace tvm {

/// Counter-based random stream (Philox4x32-10) keyed by a 64-bit seed and
/// addressed by a 64-bit stream id. A given (seed, stream_id, substream)
/// always yields the same sequence, on every platform, independent of how
/// many other streams exist or in which order they are consumed.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint16_t substream = 0) noexcept
      : seed_{seed}, stream_id_{stream_id}, substream_{substream} {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Independent stream sharing this stream's (seed, stream_id).
  RngStream substream(std::uint16_t k) const noexcept { return {seed_, stream_id_, k}; }

  std::uint32_t next_u32() noexcept {
    if (buffered_ == 0) refill();
    return block_[4 - buffered_--];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exp(rate) by inverse CDF.
  double exponential(double rate = 1.0) noexcept { return -std::log(uniform()) / rate; }

  /// Uniform integer in [0, n), n > 0, without modulo bias.
  std::uint64_t below(std::uint64_t n) noexcept {
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint16_t substream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int buffered_ = 0;
};

}  // namespace tvm
