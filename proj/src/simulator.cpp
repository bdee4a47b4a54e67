#include "tvm/simulator.hpp"

#include <string>

#include "tvm/errors.hpp"

namespace tvm {

Configuration Trajectory::state_at(double t) const {
  Configuration cfg = initial;
  for (const auto& e : events) {
    if (e.time > t) break;
    cfg.set(e.vertex, e.new_value);
  }
  return cfg;
}

Simulator::Simulator(Configuration initial, Dynamics dynamics, Engine engine, double start_time)
    : state_{std::move(initial)},
      dynamics_{dynamics},
      engine_{engine},
      time_{start_time},
      active_{state_.size()} {
  for (VertexId x = 0; x < state_.size(); ++x) {
    if (flip_rate(dynamics_, state_, x)) active_.insert(x);
  }
}

void Simulator::apply(VertexId x) {
  state_.flip(x);
  active_.assign(x, flip_rate(dynamics_, state_, x));
  if (dynamics_ == Dynamics::kThreshold) {
    state_.shape().for_each_neighbor(
        x, [&](VertexId y) { active_.assign(y, threshold_rate(state_, y)); });
  }
}

std::optional<FlipEvent> Simulator::step(RngStream& rng, double horizon,
                                         std::vector<IdleRing>* idle_rings) {
  if (engine_ == Engine::kActiveSet) {
    if (active_.empty()) {
      time_ = horizon;
      return std::nullopt;
    }
    const double next = time_ + rng.exponential(static_cast<double>(active_.size()));
    if (next > horizon) {
      time_ = horizon;
      return std::nullopt;
    }
    time_ = next;
    const VertexId x = active_.at(static_cast<std::uint32_t>(rng.below(active_.size())));
    apply(x);
    return FlipEvent{time_, x, state_[x]};
  }

  const auto n = state_.size();
  for (;;) {
    if (active_.empty() && idle_rings == nullptr) {
      time_ = horizon;
      return std::nullopt;
    }
    const double next = time_ + rng.exponential(static_cast<double>(n));
    if (next > horizon) {
      time_ = horizon;
      return std::nullopt;
    }
    time_ = next;
    const auto x = static_cast<VertexId>(rng.below(n));
    if (active_.contains(x)) {
      apply(x);
      return FlipEvent{time_, x, state_[x]};
    }
    if (idle_rings) idle_rings->push_back({time_, x});
  }
}

Trajectory run(Simulator& sim, double horizon, std::span<Observer* const> observers,
               RngStream& rng, RunOptions options) {
  if (!(horizon > sim.time())) {
    throw DomainError("horizon " + std::to_string(horizon) + " must exceed current time " +
                      std::to_string(sim.time()));
  }
  Trajectory traj{sim.state(), {}, {}, false, sim.time(), horizon};
  const bool rings = options.record_idle_rings && sim.engine() == Engine::kUniformRejection;
  traj.rings_observed = rings;

  for (auto* obs : observers) obs->on_start(sim.state(), sim.time());
  while (auto ev = sim.step(rng, horizon, rings ? &traj.idle_rings : nullptr)) {
    if (options.record_events) traj.events.push_back(*ev);
    for (auto* obs : observers) obs->on_flip(sim.state(), *ev);
  }
  for (auto* obs : observers) obs->on_finish(sim.state(), horizon);
  return traj;
}

}  // namespace tvm
