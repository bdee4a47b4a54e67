#include "tvm/coupling.hpp"

#include <algorithm>
#include <string>

#include "tvm/errors.hpp"
#include "tvm/indexed_set.hpp"

namespace tvm {

namespace {

Trajectory marginal(const Configuration& initial, const std::vector<CoupledEvent>& events,
                    double horizon, std::uint8_t mask, bool upper) {
  Trajectory traj{initial, {}, {}, false, 0.0, horizon};
  for (const auto& e : events) {
    if (e.flipped & mask) {
      traj.events.push_back({e.time, e.vertex, upper ? e.upper_value : e.lower_value});
    }
  }
  return traj;
}

void require_same_shape(const Configuration& a, const Configuration& b) {
  if (!(a.shape() == b.shape())) {
    throw PreconditionError("coupled configurations live on different tori");
  }
}

void require_dominates(const Configuration& upper, const Configuration& lower) {
  require_same_shape(upper, lower);
  if (!dominates(upper, lower)) {
    throw PreconditionError("coupled run needs lower <= upper at time 0");
  }
}

}  // namespace

Trajectory PairedTrajectory::upper() const {
  return marginal(upper_initial, events, horizon, kUpperFlipped, true);
}

Trajectory PairedTrajectory::lower() const {
  return marginal(lower_initial, events, horizon, kLowerFlipped, false);
}

bool dominates(const Configuration& upper, const Configuration& lower) {
  for (VertexId x = 0; x < upper.size(); ++x) {
    if (lower[x] > upper[x]) return false;
  }
  return true;
}

PairedTrajectory coupled_run_eta_zeta(const Configuration& upper_initial,
                                      const Configuration& lower_initial, double horizon,
                                      RngStream& rng, std::span<PairObserver* const> observers) {
  require_same_shape(upper_initial, lower_initial);
  if (!(upper_initial == lower_initial)) {
    throw PreconditionError("eta/zeta coupling starts both processes from the same state");
  }
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");

  PairedTrajectory out{upper_initial, lower_initial, {}, horizon, 0};
  Configuration eta = upper_initial;
  Configuration zeta = lower_initial;
  const auto& shape = eta.shape();

  // A vertex can change in at least one marginal iff its threshold rate is 1
  // or its death-process spin is still 1.
  IndexedSet live(eta.size());
  auto refresh = [&](VertexId x) { live.assign(x, threshold_rate(eta, x) || zeta[x]); };
  for (VertexId x = 0; x < eta.size(); ++x) refresh(x);

  double t = 0.0;
  for (auto* o : observers) o->on_start(eta, zeta, t);
  while (!live.empty()) {
    t += rng.exponential(static_cast<double>(live.size()));
    if (t > horizon) break;
    const VertexId x = live.at(static_cast<std::uint32_t>(rng.below(live.size())));
    std::uint8_t flipped = 0;
    if (zeta[x]) {
      zeta.set(x, 0);
      flipped |= kLowerFlipped;
    }
    if (threshold_rate(eta, x)) {
      eta.flip(x);
      flipped |= kUpperFlipped;
      shape.for_each_neighbor(x, refresh);
    }
    refresh(x);
    if (zeta[x] > eta[x]) ++out.domination_violations;
    const CoupledEvent ev{t, x, flipped, eta[x], zeta[x]};
    out.events.push_back(ev);
    for (auto* o : observers) o->on_event(eta, zeta, ev);
  }
  for (auto* o : observers) o->on_finish(eta, zeta, horizon);
  return out;
}

PairedTrajectory coupled_run_eta_zeta(const TorusShape& shape, double p, double horizon,
                                      RngStream& rng, std::span<PairObserver* const> observers) {
  const Configuration initial = sample_product(shape, p, rng);
  return coupled_run_eta_zeta(initial, initial, horizon, rng, observers);
}

PairedTrajectory coupled_run_monotone(const Configuration& lower_initial,
                                      const Configuration& upper_initial, double horizon,
                                      RngStream& rng, std::span<PairObserver* const> observers) {
  require_dominates(upper_initial, lower_initial);
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");

  PairedTrajectory out{upper_initial, lower_initial, {}, horizon, 0};
  Configuration upper = upper_initial;
  Configuration lower = lower_initial;
  const auto& shape = upper.shape();

  // Two event channels. `joint` holds vertices whose lower clock is live
  // (lower rate 1); at concordant vertices that clock also drives the upper
  // spin. `upper_own` holds vertices where the upper spin can flip but is not
  // already driven by the joint clock: discordant vertices (independent
  // sub-clock) and concordant ones where only the upper rate is 1.
  IndexedSet joint(upper.size());
  IndexedSet upper_own(upper.size());
  auto refresh = [&](VertexId x) {
    const bool lr = threshold_rate(lower, x) != 0;
    const bool ur = threshold_rate(upper, x) != 0;
    const bool concordant = lower[x] == upper[x];
    joint.assign(x, lr);
    upper_own.assign(x, ur && !(concordant && lr));
  };
  for (VertexId x = 0; x < upper.size(); ++x) refresh(x);

  double t = 0.0;
  for (auto* o : observers) o->on_start(upper, lower, t);
  for (;;) {
    const std::uint64_t total = std::uint64_t{joint.size()} + upper_own.size();
    if (total == 0) break;
    t += rng.exponential(static_cast<double>(total));
    if (t > horizon) break;
    const std::uint64_t pick = rng.below(total);
    std::uint8_t flipped = 0;
    VertexId x;
    if (pick < joint.size()) {
      x = joint.at(static_cast<std::uint32_t>(pick));
      const bool drive_upper = lower[x] == upper[x] && threshold_rate(upper, x);
      lower.flip(x);
      flipped |= kLowerFlipped;
      if (drive_upper) {
        upper.flip(x);
        flipped |= kUpperFlipped;
      }
    } else {
      x = upper_own.at(static_cast<std::uint32_t>(pick - joint.size()));
      upper.flip(x);
      flipped |= kUpperFlipped;
    }
    refresh(x);
    shape.for_each_neighbor(x, refresh);
    if (lower[x] > upper[x]) ++out.domination_violations;
    const CoupledEvent ev{t, x, flipped, upper[x], lower[x]};
    out.events.push_back(ev);
    for (auto* o : observers) o->on_event(upper, lower, ev);
  }
  for (auto* o : observers) o->on_finish(upper, lower, horizon);
  return out;
}

PairedTrajectory coupled_run_monotone(const TorusShape& shape, double p1, double p2,
                                      double horizon, RngStream& rng,
                                      std::span<PairObserver* const> observers) {
  if (p1 > p2) {
    throw PreconditionError("monotone coupling needs p1 <= p2, got p1=" + std::to_string(p1) +
                            " p2=" + std::to_string(p2));
  }
  if (!(p1 >= 0.0 && p2 <= 1.0)) throw DomainError("densities must lie in [0, 1]");
  Configuration lower(shape);
  Configuration upper(shape);
  for (VertexId x = 0; x < shape.size(); ++x) {
    const double u = rng.uniform();
    lower.set_unchecked(x, u < p1);
    upper.set_unchecked(x, u < p2);
  }
  lower.rebuild_counts();
  upper.rebuild_counts();
  return coupled_run_monotone(lower, upper, horizon, rng, observers);
}

ObservableSeries SurvivalRecord::surviving() const {
  std::vector<double> deaths;
  for (double t : tau) {
    if (t <= horizon) deaths.push_back(t);
  }
  std::sort(deaths.begin(), deaths.end());
  ObservableSeries s;
  auto alive = static_cast<double>(tau.size());
  s.push(start, alive);
  for (double t : deaths) s.push(t, --alive);
  s.horizon = horizon;
  return s;
}

std::uint64_t SurvivalRecord::surviving_at(double t) const {
  return static_cast<std::uint64_t>(
      std::count_if(tau.begin(), tau.end(), [t](double tx) { return tx > t; }));
}

namespace {

SurvivalRecord init_record(const Configuration& initial, double start, double horizon) {
  SurvivalRecord rec;
  rec.start = start;
  rec.horizon = horizon;
  for (VertexId x = 0; x < initial.size(); ++x) {
    if (initial[x]) rec.vertices.push_back(x);
  }
  rec.tau.assign(rec.vertices.size(), SurvivalRecord::kCensored);
  rec.first_ring.assign(rec.vertices.size(), SurvivalRecord::kCensored);
  return rec;
}

std::size_t slot_of(const SurvivalRecord& rec, VertexId x) {
  auto it = std::lower_bound(rec.vertices.begin(), rec.vertices.end(), x);
  if (it == rec.vertices.end() || *it != x) return rec.vertices.size();
  return static_cast<std::size_t>(it - rec.vertices.begin());
}

}  // namespace

SurvivalRecord survival_times(const Trajectory& traj) {
  SurvivalRecord rec = init_record(traj.initial, traj.start, traj.horizon);
  rec.rings_known = traj.rings_observed;
  for (const auto& e : traj.events) {
    const auto i = slot_of(rec, e.vertex);
    if (i == rec.vertices.size()) continue;
    rec.first_ring[i] = std::min(rec.first_ring[i], e.time);
    if (e.new_value == 0) rec.tau[i] = std::min(rec.tau[i], e.time);
  }
  for (const auto& ring : traj.idle_rings) {
    const auto i = slot_of(rec, ring.vertex);
    if (i == rec.vertices.size()) continue;
    rec.first_ring[i] = std::min(rec.first_ring[i], ring.time);
  }
  return rec;
}

SurvivalRecord survival_times(const PairedTrajectory& eta_zeta) {
  SurvivalRecord rec = init_record(eta_zeta.upper_initial, 0.0, eta_zeta.horizon);
  rec.rings_known = true;
  for (const auto& e : eta_zeta.events) {
    const auto i = slot_of(rec, e.vertex);
    if (i == rec.vertices.size()) continue;
    if (e.flipped & kLowerFlipped) rec.first_ring[i] = std::min(rec.first_ring[i], e.time);
    if ((e.flipped & kUpperFlipped) && e.upper_value == 0) {
      rec.tau[i] = std::min(rec.tau[i], e.time);
    }
  }
  return rec;
}

}  // namespace tvm
