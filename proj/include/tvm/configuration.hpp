#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tvm/rng.hpp"
#include "tvm/torus.hpp"

namespace tvm {

/// Spin configuration on a torus together with the per-vertex count of
/// neighbors in state 1 (with multiplicity, so in 0..2d). The counts are
/// kept in sync by set()/flip(); set_unchecked() plus rebuild_counts() is the
/// bulk path.
class Configuration {
 public:
  /// All-zero configuration.
  explicit Configuration(TorusShape shape);
  Configuration(TorusShape shape, std::vector<std::uint8_t> bits);

  const TorusShape& shape() const noexcept { return shape_; }
  std::uint32_t size() const noexcept { return shape_.size(); }

  std::uint8_t operator[](VertexId x) const noexcept { return bits_[x]; }
  int ones_neighbors(VertexId x) const noexcept { return ones_nbr_[x]; }
  int zero_neighbors(VertexId x) const noexcept { return shape_.degree() - ones_nbr_[x]; }
  std::uint32_t count_ones() const noexcept { return ones_; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::span<const std::uint8_t> ones_neighbor_counts() const noexcept { return ones_nbr_; }

  void set(VertexId x, std::uint8_t value) noexcept;
  void flip(VertexId x) noexcept { set(x, bits_[x] ^ 1u); }

  /// Writes the bit only; counts stay stale until rebuild_counts().
  void set_unchecked(VertexId x, std::uint8_t value) noexcept { bits_[x] = value; }
  void rebuild_counts() noexcept;

  /// Recomputes the neighbor counts from scratch and throws ConsistencyError
  /// naming the first vertex whose maintained count disagrees.
  void verify_counts() const;

  friend bool operator==(const Configuration& a, const Configuration& b) noexcept {
    return a.shape_ == b.shape_ && a.bits_ == b.bits_;
  }

 private:
  TorusShape shape_;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint8_t> ones_nbr_;
  std::uint32_t ones_ = 0;
};

/// I.i.d. Bernoulli(p) spins. Throws DomainError unless 0 <= p <= 1.
Configuration sample_product(const TorusShape& shape, double p, RngStream& rng);

/// Threshold voter flip rate: 1 iff at least d of the 2d neighbor slots
/// disagree with the spin at x.
inline int threshold_rate(const Configuration& cfg, VertexId x) noexcept {
  const int d = cfg.shape().dim();
  return cfg[x] == 0 ? (cfg.ones_neighbors(x) >= d) : (cfg.zero_neighbors(x) >= d);
}

/// Pure death process: ones die at rate 1, zeros are frozen.
inline int death_rate(const Configuration& cfg, VertexId x) noexcept { return cfg[x]; }

enum class Dynamics { kThreshold, kDeath };

inline int flip_rate(Dynamics dyn, const Configuration& cfg, VertexId x) noexcept {
  return dyn == Dynamics::kThreshold ? threshold_rate(cfg, x) : death_rate(cfg, x);
}

}  // namespace tvm
