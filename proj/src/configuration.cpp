#include "tvm/configuration.hpp"

#include <algorithm>
#include <string>

#include "tvm/errors.hpp"

namespace tvm {

Configuration::Configuration(TorusShape shape)
    : shape_{std::move(shape)}, bits_(shape_.size(), 0), ones_nbr_(shape_.size(), 0) {}

Configuration::Configuration(TorusShape shape, std::vector<std::uint8_t> bits)
    : shape_{std::move(shape)}, bits_{std::move(bits)}, ones_nbr_(shape_.size(), 0) {
  if (bits_.size() != shape_.size()) {
    throw DomainError("configuration has " + std::to_string(bits_.size()) +
                      " spins, torus has " + std::to_string(shape_.size()) + " vertices");
  }
  for (auto& b : bits_) {
    if (b > 1) throw DomainError("spin values must be 0 or 1");
  }
  rebuild_counts();
}

void Configuration::set(VertexId x, std::uint8_t value) noexcept {
  if (bits_[x] == value) return;
  bits_[x] = value;
  if (value) {
    ++ones_;
    shape_.for_each_neighbor(x, [&](VertexId y) { ++ones_nbr_[y]; });
  } else {
    --ones_;
    shape_.for_each_neighbor(x, [&](VertexId y) { --ones_nbr_[y]; });
  }
}

void Configuration::rebuild_counts() noexcept {
  std::fill(ones_nbr_.begin(), ones_nbr_.end(), 0);
  ones_ = 0;
  for (VertexId x = 0; x < size(); ++x) {
    if (!bits_[x]) continue;
    ++ones_;
    shape_.for_each_neighbor(x, [&](VertexId y) { ++ones_nbr_[y]; });
  }
}

void Configuration::verify_counts() const {
  std::uint32_t ones = 0;
  for (VertexId x = 0; x < size(); ++x) {
    int expected = 0;
    shape_.for_each_neighbor(x, [&](VertexId y) { expected += bits_[y]; });
    if (expected != ones_nbr_[x]) {
      throw ConsistencyError("ones-neighbor count at vertex " + std::to_string(x) + " is " +
                                 std::to_string(ones_nbr_[x]) + ", expected " +
                                 std::to_string(expected),
                             x);
    }
    ones += bits_[x];
  }
  if (ones != ones_) {
    throw ConsistencyError("cached ones count " + std::to_string(ones_) + " != " +
                           std::to_string(ones));
  }
}

Configuration sample_product(const TorusShape& shape, double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("density must lie in [0, 1], got " + std::to_string(p));
  }
  Configuration cfg(shape);
  for (VertexId x = 0; x < shape.size(); ++x) cfg.set_unchecked(x, rng.uniform() < p);
  cfg.rebuild_counts();
  return cfg;
}

}  // namespace tvm
