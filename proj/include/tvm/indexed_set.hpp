#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace tvm {

/// Subset of [0, capacity) with O(1) insert, erase, membership and uniform
/// sampling by position. Iteration order depends on the insertion history,
/// which is itself deterministic.
class IndexedSet {
 public:
  explicit IndexedSet(std::uint32_t capacity = 0) : pos_(capacity, kAbsent) {}

  bool contains(std::uint32_t x) const noexcept { return pos_[x] != kAbsent; }
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(items_.size()); }
  bool empty() const noexcept { return items_.empty(); }
  std::uint32_t at(std::uint32_t i) const noexcept { return items_[i]; }

  void insert(std::uint32_t x) {
    if (contains(x)) return;
    pos_[x] = static_cast<std::uint32_t>(items_.size());
    items_.push_back(x);
  }

  void erase(std::uint32_t x) noexcept {
    const std::uint32_t i = pos_[x];
    if (i == kAbsent) return;
    const std::uint32_t last = items_.back();
    items_[i] = last;
    pos_[last] = i;
    items_.pop_back();
    pos_[x] = kAbsent;
  }

  void assign(std::uint32_t x, bool member) {
    if (member) {
      insert(x);
    } else {
      erase(x);
    }
  }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> items_;
};

}  // namespace tvm
