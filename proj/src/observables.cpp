#include "tvm/observables.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

#include "tvm/errors.hpp"

namespace tvm {

void ObservableSeries::push(double t, double v) {
  if (!times.empty() && times.back() == t) {
    values.back() = v;
    return;
  }
  times.push_back(t);
  values.push_back(v);
}

double ObservableSeries::value_at(double t) const {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return values.front();
  return values[static_cast<std::size_t>(std::distance(times.begin(), it)) - 1];
}

ObservableSeries ObservableSeries::scaled(double factor) const {
  ObservableSeries out = *this;
  for (auto& v : out.values) v *= factor;
  return out;
}

Classification classify(const Configuration& cfg) {
  const auto n = cfg.size();
  const int d = cfg.shape().dim();
  Classification out;
  out.in_c.resize(n);
  out.in_d.resize(n);
  for (VertexId x = 0; x < n; ++x) {
    const int k = cfg.ones_neighbors(x);
    const bool one = cfg[x] != 0;
    const bool c = k >= d;
    const bool dd = k <= d;
    out.in_c[x] = c;
    out.in_d[x] = dd;
    out.a += one;
    out.c += c;
    out.d += dd;
    out.c_and_d += c && dd;
    out.b_and_c += !one && c;
    out.a_and_d += one && dd;
  }
  out.b = n - out.a;
  return out;
}

std::uint64_t NeighborHistogram::total() const noexcept {
  return std::accumulate(h.begin(), h.end(), std::uint64_t{0});
}

std::uint64_t NeighborHistogram::at_least(int k) const noexcept {
  if (k <= 0) return total();
  if (k > max_count()) return 0;
  return std::accumulate(h.begin() + k, h.end(), std::uint64_t{0});
}

std::uint64_t NeighborHistogram::at_most(int k) const noexcept {
  if (k < 0) return 0;
  if (k >= max_count()) return total();
  return std::accumulate(h.begin(), h.begin() + k + 1, std::uint64_t{0});
}

NeighborHistogram neighbor_histogram(const Configuration& cfg) {
  NeighborHistogram out{std::vector<std::uint64_t>(static_cast<std::size_t>(cfg.shape().degree()) + 1, 0)};
  for (auto k : cfg.ones_neighbor_counts()) ++out.h[k];
  return out;
}

void ExploredSetTracker::on_start(const Configuration& state, double time) {
  member_.assign(state.size(), 0);
  size_ = 0;
  for (VertexId x = 0; x < state.size(); ++x) {
    if (in_threshold_set(state, x)) {
      member_[x] = 1;
      ++size_;
    }
  }
  series_ = {};
  series_.push(time, static_cast<double>(size_));
}

void ExploredSetTracker::on_flip(const Configuration& state, const FlipEvent& event) {
  if (event.new_value == 0) return;
  const auto before = size_;
  state.shape().for_each_neighbor(event.vertex, [&](VertexId y) {
    if (!member_[y] && in_threshold_set(state, y)) {
      member_[y] = 1;
      ++size_;
    }
  });
  if (size_ != before) series_.push(event.time, static_cast<double>(size_));
}

void ExploredSetTracker::on_finish(const Configuration&, double horizon) {
  series_.horizon = horizon;
}

void OnesCountRecorder::on_start(const Configuration& state, double time) {
  series_ = {};
  series_.push(time, state.count_ones());
}

void OnesCountRecorder::on_flip(const Configuration& state, const FlipEvent& event) {
  series_.push(event.time, state.count_ones());
}

void OnesCountRecorder::on_finish(const Configuration&, double horizon) {
  series_.horizon = horizon;
}

namespace {

template <class Obs>
ObservableSeries replay(const Trajectory& traj, Obs& obs) {
  Configuration cfg = traj.initial;
  obs.on_start(cfg, traj.start);
  for (const auto& e : traj.events) {
    cfg.set(e.vertex, e.new_value);
    obs.on_flip(cfg, e);
  }
  obs.on_finish(cfg, traj.horizon);
  return obs.series();
}

}  // namespace

ObservableSeries ones_series(const Trajectory& traj) {
  OnesCountRecorder rec;
  return replay(traj, rec);
}

ObservableSeries accumulate_explored(const Trajectory& traj) {
  ExploredSetTracker tracker;
  return replay(traj, tracker);
}

FluidValue fluid(double p, double t) {
  if (!(p >= 0.0 && p <= 1.0) || !(t >= 0.0)) {
    throw DomainError("fluid curve needs p in [0,1] and t >= 0");
  }
  if (p < 0.5) return {p * std::exp(-t), true};
  if (p > 0.5) return {1.0 - (1.0 - p) * std::exp(-t), true};
  return {0.5, false};
}

double sup_deviation(const ObservableSeries& fraction, double p, double horizon) {
  double sup = 0.0;
  const auto m = fraction.times.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double left = fraction.times[i];
    if (left > horizon) break;
    const double right = i + 1 < m ? std::min(fraction.times[i + 1], horizon) : horizon;
    const double v = fraction.values[i];
    sup = std::max(sup, std::abs(v - fluid(p, left).value));
    sup = std::max(sup, std::abs(v - fluid(p, right).value));
  }
  return sup;
}

}  // namespace tvm
