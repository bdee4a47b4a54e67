#pragma once

#include <cstdint>
#include <vector>

#include "tvm/configuration.hpp"
#include "tvm/simulator.hpp"

namespace tvm {

/// Piecewise-constant series: values[i] holds on [times[i], times[i+1]),
/// the last value holds until the horizon.
struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> values;
  double horizon = 0.0;

  /// Appends a breakpoint; a repeated time overwrites the previous value.
  void push(double t, double v);
  double value_at(double t) const;
  double final_value() const { return values.back(); }
  /// Same breakpoints with every value multiplied by `factor`.
  ObservableSeries scaled(double factor) const;
};

/// Membership of the sets of ones (A), zeros (B), vertices with at least d
/// ones-neighbors (C) and at most d ones-neighbors (D). C and D overlap on
/// vertices with exactly d ones-neighbors.
struct Classification {
  std::vector<std::uint8_t> in_c;
  std::vector<std::uint8_t> in_d;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;
  std::uint64_t d = 0;
  std::uint64_t c_and_d = 0;
  std::uint64_t b_and_c = 0;
  std::uint64_t a_and_d = 0;
};

Classification classify(const Configuration& cfg);

inline bool in_threshold_set(const Configuration& cfg, VertexId x) noexcept {
  return cfg.ones_neighbors(x) >= cfg.shape().dim();
}

/// h[k] = number of vertices with exactly k ones-neighbors, k = 0..2d.
struct NeighborHistogram {
  std::vector<std::uint64_t> h;

  int max_count() const noexcept { return static_cast<int>(h.size()) - 1; }
  std::uint64_t total() const noexcept;
  /// Number of vertices with at least k ones-neighbors.
  std::uint64_t at_least(int k) const noexcept;
  /// Number of vertices with at most k ones-neighbors.
  std::uint64_t at_most(int k) const noexcept;
};

NeighborHistogram neighbor_histogram(const Configuration& cfg);

/// Tracks E_t, the set of vertices that have had at least d ones-neighbors
/// at some instant in [0, t]. Only the neighbors of a 0->1 flip can join.
class ExploredSetTracker : public Observer {
 public:
  void on_start(const Configuration& state, double time) override;
  void on_flip(const Configuration& state, const FlipEvent& event) override;
  void on_finish(const Configuration& state, double horizon) override;

  bool contains(VertexId x) const noexcept { return member_[x] != 0; }
  std::uint64_t size() const noexcept { return size_; }
  const ObservableSeries& series() const noexcept { return series_; }
  const std::vector<std::uint8_t>& members() const noexcept { return member_; }

 private:
  std::vector<std::uint8_t> member_;
  std::uint64_t size_ = 0;
  ObservableSeries series_;
};

/// Records |A_t| at every flip.
class OnesCountRecorder : public Observer {
 public:
  void on_start(const Configuration& state, double time) override;
  void on_flip(const Configuration& state, const FlipEvent& event) override;
  void on_finish(const Configuration& state, double horizon) override;
  const ObservableSeries& series() const noexcept { return series_; }

 private:
  ObservableSeries series_;
};

/// |A_t| over a recorded trajectory.
ObservableSeries ones_series(const Trajectory& traj);

/// |E_t| over a recorded trajectory of the threshold model.
ObservableSeries accumulate_explored(const Trajectory& traj);

struct FluidValue {
  double value;
  /// False at p == 1/2, where only the symmetric mean 1/2 is available.
  bool covered_by_theorem;
};

/// Deterministic limit of the fraction of ones: p e^{-t} below density 1/2,
/// 1 - (1-p) e^{-t} above it, 1/2 at the critical density.
FluidValue fluid(double p, double t);

/// Exact sup over [start, T] of |fraction(t) - fluid(p, t)| for a series of
/// fractions. Evaluated at both ends of every constant piece, which is exact
/// because the fluid curve is monotone in t.
double sup_deviation(const ObservableSeries& fraction, double p, double horizon);

}  // namespace tvm
