#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tvm/configuration.hpp"
#include "tvm/indexed_set.hpp"
#include "tvm/rng.hpp"

namespace tvm {

struct FlipEvent {
  double time;
  VertexId vertex;
  std::uint8_t new_value;
};

/// A clock ring at a vertex whose rate was 0, so nothing flipped.
struct IdleRing {
  double time;
  VertexId vertex;
};

/// Callbacks invoked from inside a trajectory's event loop.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void on_start(const Configuration& /*state*/, double /*time*/) {}
  /// `state` is the configuration just after the flip.
  virtual void on_flip(const Configuration& /*state*/, const FlipEvent& /*event*/) {}
  virtual void on_finish(const Configuration& /*state*/, double /*horizon*/) {}
};

struct Trajectory {
  Configuration initial;
  std::vector<FlipEvent> events;
  /// Filled only when the run observed every clock ring (uniform engine).
  std::vector<IdleRing> idle_rings;
  bool rings_observed = false;
  double start = 0.0;
  double horizon = 0.0;

  /// Replays all events with time <= t.
  Configuration state_at(double t) const;
  Configuration final_state() const { return state_at(horizon); }
};

enum class Engine {
  /// Gillespie over the set of rate-1 vertices: Exp(|active|) waiting time,
  /// uniform vertex from the active set. Every draw is a flip.
  kActiveSet,
  /// Superposition of all n unit clocks: Exp(n) waiting time, uniform vertex,
  /// flip only if its rate is 1. Sees every ring, so it is slower but can
  /// report idle rings.
  kUniformRejection,
};

/// Sequential event loop for one trajectory of either the threshold voter
/// model or the death process.
class Simulator {
 public:
  Simulator(Configuration initial, Dynamics dynamics, Engine engine = Engine::kActiveSet,
            double start_time = 0.0);

  const Configuration& state() const noexcept { return state_; }
  double time() const noexcept { return time_; }
  Dynamics dynamics() const noexcept { return dynamics_; }
  Engine engine() const noexcept { return engine_; }

  /// Vertices whose flip rate is currently 1; its size is the total rate.
  const IndexedSet& active() const noexcept { return active_; }
  bool absorbed() const noexcept { return active_.empty(); }

  /// Advances to the next flip. Returns nullopt when the next flip would fall
  /// after `horizon` (or the state is absorbing); the clock then sits at
  /// `horizon`. Idle rings are appended to `idle_rings` when it is non-null
  /// and the engine observes them.
  std::optional<FlipEvent> step(RngStream& rng, double horizon,
                                std::vector<IdleRing>* idle_rings = nullptr);

 private:
  void apply(VertexId x);

  Configuration state_;
  Dynamics dynamics_;
  Engine engine_;
  double time_;
  IndexedSet active_;
};

struct RunOptions {
  bool record_events = true;
  bool record_idle_rings = false;
};

/// Steps `sim` until `horizon`, notifying observers at the start, after each
/// flip and at the horizon. Throws DomainError if horizon <= sim.time().
Trajectory run(Simulator& sim, double horizon, std::span<Observer* const> observers,
               RngStream& rng, RunOptions options = {});

inline Trajectory run(Simulator& sim, double horizon, RngStream& rng, RunOptions options = {}) {
  return run(sim, horizon, std::span<Observer* const>{}, rng, options);
}

}  // namespace tvm
