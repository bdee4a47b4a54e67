#include "tvm/ballgame.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tvm/errors.hpp"
#include "tvm/parallel.hpp"
#include "tvm/simulator.hpp"

namespace tvm {

std::int64_t BoxState::total() const noexcept {
  return std::accumulate(b.begin(), b.end(), std::int64_t{0});
}

std::int64_t BoxState::upper_mass() const noexcept { return at_least(dim); }

std::int64_t BoxState::at_least(int k) const noexcept {
  if (k <= 0) return total();
  if (k >= static_cast<int>(b.size())) return 0;
  return std::accumulate(b.begin() + k, b.end(), std::int64_t{0});
}

BoxState boxes_from_config(const Configuration& cfg) {
  const auto hist = neighbor_histogram(cfg);
  BoxState out{cfg.shape().dim(), {}, 0.0};
  out.b.assign(hist.h.begin(), hist.h.end());
  return out;
}

void apply_flip_moves(BoxState& boxes, const Configuration& before, VertexId x) {
  const int step = before[x] ? -1 : +1;
  // Current box of every neighbor already moved, so a neighbor reached
  // through two slots moves twice.
  std::vector<std::pair<VertexId, int>> moved;
  before.shape().for_each_neighbor(x, [&](VertexId y) {
    auto it = std::find_if(moved.begin(), moved.end(), [y](const auto& e) { return e.first == y; });
    const int box = it == moved.end() ? before.ones_neighbors(y) : it->second;
    --boxes.b[static_cast<std::size_t>(box)];
    ++boxes.b[static_cast<std::size_t>(box + step)];
    if (it == moved.end()) {
      moved.emplace_back(y, box + step);
    } else {
      it->second = box + step;
    }
  });
}

void greedy_move(BoxState& boxes, RngStream& rng) {
  const int d = boxes.dim;
  const std::int64_t need = 2 * static_cast<std::int64_t>(d);
  auto& b = boxes.b;
  std::int64_t below = 0;
  for (int k = 0; k < d; ++k) below += b[static_cast<std::size_t>(k)];

  if (below >= need) {
    // Drain from the top down using pre-move counts; apply afterwards.
    std::vector<std::int64_t> delta(b.size(), 0);
    std::int64_t remaining = need;
    for (int k = d - 1; k >= 0 && remaining > 0; --k) {
      const auto take = std::min(b[static_cast<std::size_t>(k)], remaining);
      delta[static_cast<std::size_t>(k)] -= take;
      delta[static_cast<std::size_t>(k) + 1] += take;
      remaining -= take;
    }
    for (std::size_t k = 0; k < b.size(); ++k) b[k] += delta[k];
    return;
  }

  for (int k = d - 1; k >= 0; --k) {
    b[static_cast<std::size_t>(k) + 1] += b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(k)] = 0;
  }
  const auto top = static_cast<std::size_t>(2 * d);
  for (std::int64_t i = 0; i < need - below; ++i) {
    const auto mass = boxes.upper_mass();
    auto pick = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(mass)));
    std::size_t k = static_cast<std::size_t>(d);
    while (pick >= b[k]) pick -= b[k++];
    --b[k];
    ++b[top];
  }
}

BoxGameRun approach2_run(const BoxState& initial, double horizon, RngStream& rng) {
  BoxGameRun out{{}, initial, 0};
  auto& state = out.final_state;
  auto mass = state.upper_mass();
  out.upper_mass.push(state.time, static_cast<double>(mass));
  while (mass > 0) {
    const double next = state.time + rng.exponential(static_cast<double>(mass));
    if (next > horizon) break;
    state.time = next;
    greedy_move(state, rng);
    ++out.moves;
    const auto updated = state.upper_mass();
    if (updated < mass) {
      throw ConsistencyError("greedy game lost upper mass: " + std::to_string(mass) + " -> " +
                             std::to_string(updated));
    }
    mass = updated;
    out.upper_mass.push(state.time, static_cast<double>(mass));
  }
  state.time = horizon;
  out.upper_mass.horizon = horizon;
  return out;
}

int stable_floor(double x) { return static_cast<int>(std::floor(x + 1e-9)); }

double lumping_density(double p) { return 0.25 + p / 2.0; }

int lumping_box(int dim, double p) { return stable_floor(2.0 * dim * lumping_density(p)); }

BoxState approach3_init(const BoxState& boxes, double p) {
  if (!(p >= 0.0 && p < 0.5)) {
    throw DomainError("lumping needs 0 <= p < 1/2, got " + std::to_string(p));
  }
  BoxState out = boxes;
  const int d = out.dim;
  for (int k = lumping_box(d, p); k < d; ++k) {
    out.b[static_cast<std::size_t>(d)] += out.b[static_cast<std::size_t>(k)];
    out.b[static_cast<std::size_t>(k)] = 0;
  }
  return out;
}

int single_box_steps(int dim, double p) {
  // 1 - 2 p0 == 1/2 - p; the latter rounds more predictably.
  return stable_floor(dim * (0.5 - p));
}

SingleBoxRun approach4_run(std::int64_t initial, int dim, double p, double horizon,
                           RngStream& rng) {
  const int m = single_box_steps(dim, p);
  if (m < 1) {
    const int min_d = static_cast<int>(std::ceil(1.0 / (0.5 - p) - 1e-9));
    throw DomainError("single-box process degenerate: floor(d(1-2p0)) = 0 for d=" +
                      std::to_string(dim) + ", p=" + std::to_string(p) +
                      "; need d >= " + std::to_string(min_d));
  }
  SingleBoxRun out;
  out.steps = m;
  out.initial = initial;
  out.count.push(0.0, static_cast<double>(initial));
  const std::int64_t jump = 2 * static_cast<std::int64_t>(dim);
  std::int64_t count = initial;
  double t = 0.0;
  while (count > 0) {
    double sum = 0.0;
    for (int l = 0; l < m; ++l) sum += rng.exponential();
    const double tau = sum / static_cast<double>(count);
    out.inter_jump.push_back(tau);
    out.ratios.push_back(sum / m);
    t += tau;
    if (t > horizon) break;
    count += jump;
    out.jump_times.push_back(t);
    out.count.push(t, static_cast<double>(count));
  }
  out.count.horizon = horizon;
  return out;
}

std::vector<DominanceReport::Violation> DominanceReport::violations(double tolerance_se) const {
  std::vector<Violation> out;
  for (int a = 0; a + 1 < static_cast<int>(survival.size()); ++a) {
    for (std::size_t j = 0; j < m_grid.size(); ++j) {
      const auto& lo = survival[static_cast<std::size_t>(a)][j];
      const auto& hi = survival[static_cast<std::size_t>(a) + 1][j];
      const double gap = lo.survival - hi.survival;
      const double se = std::hypot(lo.std_error, hi.std_error);
      if (gap > tolerance_se * se) out.push_back({a, m_grid[j], gap, se});
    }
  }
  return out;
}

std::vector<double> default_m_grid(const TorusShape& shape, int points) {
  std::vector<double> grid;
  const double n = shape.size();
  for (int j = 0; j < points; ++j) {
    grid.push_back(std::round(n * j / std::max(points - 1, 1)));
  }
  return grid;
}

DominanceReport dominance_experiment(const TorusShape& shape, double p, double horizon,
                                     std::uint64_t replicas, std::vector<double> m_grid,
                                     std::uint64_t seed, std::uint64_t first_stream,
                                     unsigned workers) {
  const int d = shape.dim();
  if (!(p > 0.0 && p < 0.5)) {
    throw DomainError("dominance experiment needs 0 < p < 1/2, got " + std::to_string(p));
  }
  if (!(4.0 * p * (1.0 - p) > 1.0 / shape.side())) {
    throw DomainError("dominance experiment needs 4p(1-p) > 1/r");
  }
  if (single_box_steps(d, p) < 1) {
    throw DomainError("dominance experiment needs floor(d(1-2p0)) >= 1");
  }
  if (replicas == 0) throw DomainError("dominance experiment needs at least one replica");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");

  DominanceReport rep;
  rep.dim = d;
  rep.side = shape.side();
  rep.p = p;
  rep.horizon = horizon;
  rep.replicas = replicas;
  rep.m_grid = std::move(m_grid);
  rep.samples.assign(4, std::vector<double>(replicas, 0.0));

  parallel_for(replicas, workers, [&](std::uint64_t i) {
    const RngStream base(seed, first_stream + i);
    auto init_rng = base.substream(0);
    const Configuration initial = sample_product(shape, p, init_rng);
    const BoxState boxes = boxes_from_config(initial);

    auto sim_rng = base.substream(1);
    Simulator sim(initial, Dynamics::kThreshold);
    ExploredSetTracker explored;
    Observer* obs[] = {&explored};
    run(sim, horizon, obs, sim_rng, {.record_events = false});
    rep.samples[0][i] = static_cast<double>(explored.size());

    auto greedy_rng = base.substream(2);
    rep.samples[1][i] = approach2_run(boxes, horizon, greedy_rng).upper_mass.final_value();

    auto lumped_rng = base.substream(3);
    const BoxState lumped = approach3_init(boxes, p);
    rep.samples[2][i] = approach2_run(lumped, horizon, lumped_rng).upper_mass.final_value();

    auto single_rng = base.substream(4);
    rep.samples[3][i] =
        approach4_run(lumped.upper_mass(), d, p, horizon, single_rng).count.final_value();
  });

  const auto n = static_cast<double>(replicas);
  for (const auto& s : rep.samples) {
    std::vector<SurvivalEstimate> row;
    for (double m : rep.m_grid) {
      const auto above = std::count_if(s.begin(), s.end(), [m](double v) { return v > m; });
      const double surv = static_cast<double>(above) / n;
      row.push_back({m, surv, std::sqrt(surv * (1.0 - surv) / n)});
    }
    rep.survival.push_back(std::move(row));
  }
  return rep;
}

}  // namespace tvm
