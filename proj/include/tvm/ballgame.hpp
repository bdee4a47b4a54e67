#pragma once

#include <cstdint>
#include <vector>

#include "tvm/configuration.hpp"
#include "tvm/observables.hpp"
#include "tvm/rng.hpp"
#include "tvm/torus.hpp"

namespace tvm {

/// Balls in boxes b[0..2d]. Box k starts with the vertices that have k
/// ones-neighbors; `dim` is d, so boxes d..2d are the threshold region.
struct BoxState {
  int dim = 0;
  std::vector<std::int64_t> b;
  double time = 0.0;

  std::int64_t total() const noexcept;
  /// Balls in boxes d..2d.
  std::int64_t upper_mass() const noexcept;
  std::int64_t at_least(int k) const noexcept;
  friend bool operator==(const BoxState&, const BoxState&) = default;
};

/// b[k] = number of vertices with exactly k ones-neighbors.
BoxState boxes_from_config(const Configuration& cfg);

/// Moves the balls touched by flipping vertex x of `before` (the state prior
/// to the flip): one ball per neighbor slot steps right for a 0->1 flip and
/// left for a 1->0 flip. A neighbor reached through two slots steps twice.
void apply_flip_moves(BoxState& boxes, const Configuration& before, VertexId x);

/// One move of the greedy right-shifting game: 2d balls from the nonempty
/// boxes below d closest to d each step one box right, the last box drained
/// partially. If fewer than 2d balls sit below d, every box below d shifts
/// right and the shortfall is made up by drawing balls, one at a time and
/// proportionally to the current counts, from boxes d..2d into box 2d.
void greedy_move(BoxState& boxes, RngStream& rng);

struct BoxGameRun {
  ObservableSeries upper_mass;
  BoxState final_state;
  std::uint64_t moves = 0;
};

/// Runs greedy moves at rate equal to the current upper mass until the
/// horizon. Upper mass is nondecreasing (checked, ConsistencyError).
BoxGameRun approach2_run(const BoxState& initial, double horizon, RngStream& rng);

/// The lumping density 1/4 + p/2, strictly between p and 1/2 for p < 1/2.
double lumping_density(double p);

/// First box lumped into box d: floor(2 d p0).
int lumping_box(int dim, double p);

/// Empties boxes floor(2d p0)..d-1 into box d. Throws DomainError if p >= 1/2.
BoxState approach3_init(const BoxState& boxes, double p);

/// Steps needed per 2d-increment of the single-box process: floor(d (1 - 2 p0)).
int single_box_steps(int dim, double p);

struct SingleBoxRun {
  ObservableSeries count;
  std::vector<double> jump_times;
  std::vector<double> inter_jump;
  /// inter_jump[j] / E[inter_jump[j]], each distributed as the mean of m
  /// unit exponentials.
  std::vector<double> ratios;
  int steps = 0;
  std::int64_t initial = 0;
};

/// Single-box process started with `initial` balls: the j-th jump adds 2d
/// balls after a sum of m unit exponentials divided by initial + 2d(j-1).
/// The first jump past the horizon is generated (and its ratio reported) but
/// not applied. Throws DomainError when m = 0, naming the smallest
/// admissible d.
SingleBoxRun approach4_run(std::int64_t initial, int dim, double p, double horizon,
                           RngStream& rng);

/// Floor with a 1e-9 tolerance so that products like 10 * (1 - 2*0.4) land
/// on the intended integer despite binary rounding.
int stable_floor(double x);

struct SurvivalEstimate {
  double m;
  double survival;
  double std_error;
};

struct DominanceReport {
  static constexpr const char* kNames[4] = {"explored", "greedy", "lumped", "single_box"};

  int dim = 0;
  int side = 0;
  double p = 0.0;
  double horizon = 0.0;
  std::uint64_t replicas = 0;
  std::vector<double> m_grid;
  /// samples[a][i]: final value of approach a in replica i.
  std::vector<std::vector<double>> samples;
  /// survival[a][j] = P(value_a > m_grid[j]).
  std::vector<std::vector<SurvivalEstimate>> survival;

  struct Violation {
    int lower_approach;
    double m;
    double gap;
    double combined_se;
  };
  /// Adjacent pairs (a, a+1) where survival[a] exceeds survival[a+1] by more
  /// than `tolerance_se` combined standard errors.
  std::vector<Violation> violations(double tolerance_se = 2.0) const;
};

/// Evenly spaced grid of `points` thresholds on [0, r^d], rounded to integers.
std::vector<double> default_m_grid(const TorusShape& shape, int points = 20);

/// Estimates P(X > M) for X = |E_T| from the threshold model, the greedy
/// game seeded from the same initial configuration, the lumped game, and the
/// single-box process seeded with |I_0(floor(2 d p0))|. Replica i uses
/// stream id `first_stream + i`. Throws DomainError unless
/// 4p(1-p) > 1/r, p < 1/2 and m >= 1.
DominanceReport dominance_experiment(const TorusShape& shape, double p, double horizon,
                                     std::uint64_t replicas, std::vector<double> m_grid,
                                     std::uint64_t seed, std::uint64_t first_stream = 0,
                                     unsigned workers = 1);

}  // namespace tvm
