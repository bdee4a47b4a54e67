#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "tvm/configuration.hpp"
#include "tvm/observables.hpp"
#include "tvm/rng.hpp"
#include "tvm/simulator.hpp"

namespace tvm {

/// One event of a coupled pair. `flipped` is a bit mask: 1 = upper, 2 = lower.
struct CoupledEvent {
  double time;
  VertexId vertex;
  std::uint8_t flipped;
  std::uint8_t upper_value;
  std::uint8_t lower_value;
};

inline constexpr std::uint8_t kUpperFlipped = 1;
inline constexpr std::uint8_t kLowerFlipped = 2;

/// Callbacks for coupled runs, invoked after every event with both states.
class PairObserver {
 public:
  virtual ~PairObserver() = default;
  virtual void on_start(const Configuration& /*upper*/, const Configuration& /*lower*/,
                        double /*time*/) {}
  virtual void on_event(const Configuration& /*upper*/, const Configuration& /*lower*/,
                        const CoupledEvent& /*event*/) {}
  virtual void on_finish(const Configuration& /*upper*/, const Configuration& /*lower*/,
                         double /*horizon*/) {}
};

struct PairedTrajectory {
  Configuration upper_initial;
  Configuration lower_initial;
  std::vector<CoupledEvent> events;
  double horizon = 0.0;
  /// Events after which lower(x) > upper(x) at the updated vertex. Since only
  /// that vertex changes, zero here means lower <= upper held everywhere at
  /// every event time.
  std::uint64_t domination_violations = 0;

  Trajectory upper() const;
  Trajectory lower() const;
};

/// True iff lower(x) <= upper(x) for every vertex.
bool dominates(const Configuration& upper, const Configuration& lower);

/// Runs the threshold voter model (upper) and the death process (lower) on
/// one shared unit clock per vertex. At a ring of x the lower spin dies if it
/// is 1 and the upper spin flips iff its threshold rate is 1. Both start from
/// the same configuration; throws PreconditionError otherwise.
PairedTrajectory coupled_run_eta_zeta(const Configuration& upper_initial,
                                      const Configuration& lower_initial, double horizon,
                                      RngStream& rng, std::span<PairObserver* const> observers = {});

/// Samples the common initial state from the product measure first.
PairedTrajectory coupled_run_eta_zeta(const TorusShape& shape, double p, double horizon,
                                      RngStream& rng, std::span<PairObserver* const> observers = {});

/// Order-preserving coupling of two threshold voter models. Where the spins
/// agree, one clock drives both and they flip together whenever both can;
/// where lower = 0 < upper = 1, each side has its own clock so the two
/// never flip simultaneously. Throws PreconditionError unless lower <= upper.
PairedTrajectory coupled_run_monotone(const Configuration& lower_initial,
                                      const Configuration& upper_initial, double horizon,
                                      RngStream& rng, std::span<PairObserver* const> observers = {});

/// Initial coupling through one uniform U_x per vertex: lower = 1{U_x < p1},
/// upper = 1{U_x < p2}. Throws PreconditionError if p1 > p2.
PairedTrajectory coupled_run_monotone(const TorusShape& shape, double p1, double p2,
                                      double horizon, RngStream& rng,
                                      std::span<PairObserver* const> observers = {});

/// Per initially-occupied vertex: the first time its spin is 0 and the first
/// ring of its clock. Censored entries are +infinity.
struct SurvivalRecord {
  static constexpr double kCensored = std::numeric_limits<double>::infinity();

  std::vector<VertexId> vertices;
  std::vector<double> tau;
  std::vector<double> first_ring;
  /// False when the source trajectory did not observe idle rings; first_ring
  /// then holds only what the flips reveal (an upper bound).
  bool rings_known = false;
  double start = 0.0;
  double horizon = 0.0;

  /// |F_t| = number of vertices with tau > t, as a series.
  ObservableSeries surviving() const;
  std::uint64_t surviving_at(double t) const;
};

/// From a threshold-model trajectory. Ring times are exact when the
/// trajectory observed idle rings.
SurvivalRecord survival_times(const Trajectory& traj);

/// From an eta/zeta coupled run: the death time of the lower spin is the
/// first ring of the shared clock.
SurvivalRecord survival_times(const PairedTrajectory& eta_zeta);

}  // namespace tvm
