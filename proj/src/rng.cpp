#include "tvm/rng.hpp"

namespace tvm {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void philox_round(std::array<std::uint32_t, 4>& c, std::array<std::uint32_t, 2> k) noexcept {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

void RngStream::refill() noexcept {
  // Counter layout: 48-bit block index, 16-bit substream, 64-bit stream id.
  const std::uint64_t hi = (counter_ & 0xFFFFFFFFFFFFull) | (std::uint64_t{substream_} << 48);
  std::array<std::uint32_t, 4> c{static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32),
                                 static_cast<std::uint32_t>(stream_id_),
                                 static_cast<std::uint32_t>(stream_id_ >> 32)};
  std::array<std::uint32_t, 2> k{static_cast<std::uint32_t>(seed_),
                                 static_cast<std::uint32_t>(seed_ >> 32)};
  for (int round = 0; round < 10; ++round) {
    philox_round(c, k);
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  block_ = c;
  buffered_ = 4;
  ++counter_;
}

}  // namespace tvm
