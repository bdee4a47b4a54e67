#include "tvm/torus.hpp"

#include <algorithm>
#include <string>

#include "tvm/errors.hpp"

namespace tvm {

TorusShape::TorusShape(int d, int r) : d_{d}, r_{r}, n_{1} {
  if (d < 1) {
    throw DomainError("torus dimension must be at least 1, got " + std::to_string(d));
  }
  if (r < 2) {
    throw DomainError("torus side length must be at least 2, got " + std::to_string(r));
  }
  std::uint64_t n = 1;
  stride_.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    stride_.push_back(static_cast<std::uint32_t>(n));
    n *= static_cast<std::uint64_t>(r);
    if (n > kMaxVertices) {
      throw CapacityError("torus " + std::to_string(r) + "^" + std::to_string(d) +
                          " exceeds 2^31 vertices");
    }
  }
  n_ = static_cast<std::uint32_t>(n);
}

VertexId TorusShape::encode(std::span<const int> coords) const {
  if (coords.size() != static_cast<std::size_t>(d_)) {
    throw DomainError("expected " + std::to_string(d_) + " coordinates, got " +
                      std::to_string(coords.size()));
  }
  VertexId x = 0;
  for (int i = 0; i < d_; ++i) {
    const int c = coords[static_cast<std::size_t>(i)];
    if (c < 1 || c > r_) {
      throw DomainError("coordinate " + std::to_string(c) + " in dimension " +
                        std::to_string(i + 1) + " outside {1.." + std::to_string(r_) + "}");
    }
    x += static_cast<VertexId>(c - 1) * stride_[static_cast<std::size_t>(i)];
  }
  return x;
}

std::vector<int> TorusShape::decode(VertexId x) const {
  if (!contains(x)) {
    throw DomainError("vertex index " + std::to_string(x) + " outside [0, " +
                      std::to_string(n_) + ")");
  }
  std::vector<int> coords(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) coords[static_cast<std::size_t>(i)] = coordinate(x, i);
  return coords;
}

std::vector<VertexId> TorusShape::neighbors(VertexId x) const {
  std::vector<VertexId> out;
  out.reserve(static_cast<std::size_t>(degree()));
  for_each_neighbor(x, [&](VertexId y) { out.push_back(y); });
  return out;
}

std::vector<VertexId> TorusShape::shared_neighbors(VertexId x, VertexId y) const {
  auto nx = neighbors(x);
  auto ny = neighbors(y);
  std::sort(nx.begin(), nx.end());
  nx.erase(std::unique(nx.begin(), nx.end()), nx.end());
  std::sort(ny.begin(), ny.end());
  ny.erase(std::unique(ny.begin(), ny.end()), ny.end());
  std::vector<VertexId> out;
  std::set_intersection(nx.begin(), nx.end(), ny.begin(), ny.end(), std::back_inserter(out));
  return out;
}

std::vector<VertexId> TorusShape::two_hop_set(VertexId x) const {
  // z shares a neighbor with x iff z is a neighbor of a neighbor of x.
  std::vector<VertexId> out;
  out.reserve(static_cast<std::size_t>(4 * d_ * d_));
  for_each_neighbor(x, [&](VertexId y) {
    for_each_neighbor(y, [&](VertexId z) {
      if (z != x) out.push_back(z);
    });
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace tvm
