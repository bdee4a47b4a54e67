#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tvm {

using VertexId = std::uint32_t;

/// Largest admissible vertex count r^d.
inline constexpr std::uint64_t kMaxVertices = std::uint64_t{1} << 31;

/// The d-dimensional torus {1..r}^d with +-1 wraparound adjacency in every
/// dimension. Vertices are indexed mixed-radix little-endian:
/// index = sum_i (x_i - 1) * r^(i-1).
///
/// For r == 2 the up and down neighbor in a dimension coincide, so the
/// torus is a multigraph and every neighbor appears twice. Degree is always
/// exactly 2d counted with multiplicity.
class TorusShape {
 public:
  /// Throws DomainError for d < 1 or r < 2, CapacityError if r^d > 2^31.
  TorusShape(int d, int r);

  int dim() const noexcept { return d_; }
  int side() const noexcept { return r_; }
  std::uint32_t size() const noexcept { return n_; }
  int degree() const noexcept { return 2 * d_; }
  /// Every neighbor slot of a vertex carries this multiplicity.
  int multiplicity() const noexcept { return r_ == 2 ? 2 : 1; }

  /// Coordinates are 1-based, one per dimension.
  VertexId encode(std::span<const int> coords) const;
  std::vector<int> decode(VertexId x) const;

  /// Coordinate of x along dimension i (0-based dimension, 1-based value).
  int coordinate(VertexId x, int i) const noexcept {
    return static_cast<int>((x / stride_[i]) % static_cast<std::uint32_t>(r_)) + 1;
  }

  VertexId up(VertexId x, int i) const noexcept {
    const auto c = (x / stride_[i]) % static_cast<std::uint32_t>(r_);
    return c + 1 == static_cast<std::uint32_t>(r_) ? x - c * stride_[i]
                                                    : x + stride_[i];
  }
  VertexId down(VertexId x, int i) const noexcept {
    const auto c = (x / stride_[i]) % static_cast<std::uint32_t>(r_);
    return c == 0 ? x + (static_cast<std::uint32_t>(r_) - 1) * stride_[i]
                  : x - stride_[i];
  }

  /// Visits all 2d neighbor slots of x (up then down per dimension).
  template <class F>
  void for_each_neighbor(VertexId x, F&& f) const {
    for (int i = 0; i < d_; ++i) {
      f(up(x, i));
      f(down(x, i));
    }
  }

  /// Multiset of the 2d neighbors of x, up then down per dimension.
  std::vector<VertexId> neighbors(VertexId x) const;

  /// Vertices adjacent to both x and y, sorted, without repetition.
  std::vector<VertexId> shared_neighbors(VertexId x, VertexId y) const;

  /// Sorted set {z != x : N(z, x) nonempty}. Its size is 2d^2 whenever
  /// r >= 5; smaller tori fold some two-step displacements together.
  std::vector<VertexId> two_hop_set(VertexId x) const;

  bool contains(VertexId x) const noexcept { return x < n_; }

  friend bool operator==(const TorusShape& a, const TorusShape& b) noexcept {
    return a.d_ == b.d_ && a.r_ == b.r_;
  }

 private:
  int d_;
  int r_;
  std::uint32_t n_;
  std::vector<std::uint32_t> stride_;
};

}  // namespace tvm
