#include <tuple>
#include <cmath>

#include "doctest.h"
#include "tvm/coupling.hpp"
#include "tvm/errors.hpp"
#include "tvm/observables.hpp"
#include "tvm/oracle.hpp"

using tvm::Configuration;
using tvm::TorusShape;

namespace {

/// Checks lower <= upper over the whole torus after every event.
class DominationAudit : public tvm::PairObserver {
 public:
  void on_start(const Configuration& u, const Configuration& l, double) override { check(u, l); }
  void on_event(const Configuration& u, const Configuration& l, const tvm::CoupledEvent&) override {
    check(u, l);
  }
  std::uint64_t failures = 0;
  std::uint64_t checks = 0;

 private:
  void check(const Configuration& u, const Configuration& l) {
    ++checks;
    failures += !tvm::dominates(u, l);
  }
};

struct Moments {
  double sum = 0.0;
  double sum2 = 0.0;
  double sum3 = 0.0;
  double sum4 = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    sum2 += x * x;
    sum3 += x * x * x;
    sum4 += x * x * x * x;
    ++n;
  }
  double mean() const { return sum / n; }
  double var() const { return (sum2 - sum * sum / n) / (n - 1); }
  double se() const { return std::sqrt(var() / n); }
  double var_se() const {
    const double m = mean();
    const double m4 = sum4 / n - 4 * m * sum3 / n + 6 * m * m * sum2 / n - 3 * m * m * m * m;
    const double s2 = var();
    return std::sqrt((m4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n);
  }
};

}  // namespace

TEST_CASE("eta/zeta degenerate densities") {
  const TorusShape s(3, 3);
  tvm::RngStream rng(31, 0);
  const auto zero = tvm::coupled_run_eta_zeta(s, 0.0, 5.0, rng);
  CHECK(zero.events.empty());

  const auto one = tvm::coupled_run_eta_zeta(s, 1.0, 5.0, rng);
  CHECK_FALSE(one.events.empty());
  for (const auto& e : one.events) {
    CHECK(e.flipped == tvm::kLowerFlipped);
    CHECK(e.upper_value == 1);
  }
  CHECK(one.upper().final_state().count_ones() == s.size());
  CHECK(one.lower().final_state().count_ones() < s.size());
  CHECK(one.domination_violations == 0);
}

TEST_CASE("eta/zeta rejects different starting states") {
  const TorusShape s(1, 3);
  tvm::RngStream rng(32, 0);
  CHECK_THROWS_AS(tvm::coupled_run_eta_zeta(Configuration(s, {1, 0, 0}), Configuration(s), 1.0, rng),
                  tvm::PreconditionError);
}

TEST_CASE("a ring at a stable one kills only the death spin") {
  // d = 2, r = 3. Vertex 0 has neighbors 1, 2, 3, 6; one zero among them.
  const TorusShape s(2, 3);
  const Configuration one_zero(s, {1, 1, 1, 1, 0, 0, 0, 0, 0});
  REQUIRE(one_zero.zero_neighbors(0) == 1);
  int seen = 0;
  for (int seed = 0; seed < 400 && seen < 20; ++seed) {
    tvm::RngStream rng(33, seed);
    const auto pt = tvm::coupled_run_eta_zeta(one_zero, one_zero, 10.0, rng);
    if (pt.events.empty() || pt.events.front().vertex != 0) continue;
    const auto& e = pt.events.front();
    CHECK(e.flipped == tvm::kLowerFlipped);
    CHECK(e.upper_value == 1);
    CHECK(e.lower_value == 0);
    ++seen;
  }
  CHECK(seen > 0);
}

TEST_CASE("domination holds after every event") {
  for (auto [d, r, p] : {std::tuple{2, 3, 0.4}, {3, 2, 0.5}, {4, 2, 0.3}, {2, 5, 0.6}}) {
    const TorusShape s(d, r);
    for (int i = 0; i < 50; ++i) {
      tvm::RngStream rng(34, i);
      DominationAudit audit;
      tvm::PairObserver* obs[] = {&audit};
      const auto pt = tvm::coupled_run_eta_zeta(s, p, 3.0, rng, obs);
      CHECK(audit.failures == 0);
      CHECK(pt.domination_violations == 0);
      CHECK(audit.checks == pt.events.size() + 1);
    }
  }
}

TEST_CASE("monotone coupling examples") {
  const TorusShape s(3, 3);
  {
    tvm::RngStream rng(35, 0);
    const auto pt = tvm::coupled_run_monotone(s, 0.4, 0.4, 3.0, rng);
    CHECK(pt.lower_initial == pt.upper_initial);
    for (const auto& e : pt.events) CHECK(e.flipped == (tvm::kLowerFlipped | tvm::kUpperFlipped));
    CHECK(pt.lower().final_state() == pt.upper().final_state());
  }
  {
    tvm::RngStream rng(35, 1);
    const auto pt = tvm::coupled_run_monotone(s, 0.0, 1.0, 3.0, rng);
    CHECK(pt.events.empty());
    CHECK(pt.lower_initial.count_ones() == 0);
    CHECK(pt.upper_initial.count_ones() == s.size());
  }
  tvm::RngStream rng(35, 2);
  CHECK_THROWS_AS(tvm::coupled_run_monotone(s, 0.5, 0.4, 1.0, rng), tvm::PreconditionError);
  CHECK_THROWS_AS(tvm::coupled_run_monotone(Configuration(s, std::vector<std::uint8_t>(27, 1)),
                                            Configuration(s), 1.0, rng),
                  tvm::PreconditionError);
}

TEST_CASE("discordant site with both flips eligible never flips both") {
  // d = 2, r = 3, site 0 with neighbors 1, 2, 3, 6. Lower: 0 with two
  // ones-neighbors. Upper: 1 with two zero-neighbors.
  const TorusShape s(2, 3);
  const Configuration lower(s, {0, 1, 1, 0, 0, 0, 0, 0, 0});
  const Configuration upper(s, {1, 1, 1, 0, 0, 0, 0, 0, 0});
  REQUIRE(lower.ones_neighbors(0) == 2);
  REQUIRE(upper.zero_neighbors(0) == 2);
  int seen = 0;
  for (int seed = 0; seed < 400; ++seed) {
    tvm::RngStream rng(36, seed);
    const auto pt = tvm::coupled_run_monotone(lower, upper, 10.0, rng);
    for (const auto& e : pt.events) {
      if (e.vertex != 0) continue;
      CHECK((e.flipped == tvm::kLowerFlipped || e.flipped == tvm::kUpperFlipped));
      CHECK(e.upper_value == e.lower_value);
      ++seen;
      break;
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("monotone coupling keeps the order and the threshold sets nested") {
  for (auto [p1, p2] : {std::pair{0.3, 0.45}, {0.1, 0.9}, {0.45, 0.55}, {0.2, 0.2}}) {
    const TorusShape s(4, 2);
    for (int i = 0; i < 40; ++i) {
      tvm::RngStream rng(37, i);
      DominationAudit audit;
      tvm::PairObserver* obs[] = {&audit};
      const auto pt = tvm::coupled_run_monotone(s, p1, p2, 2.0, rng, obs);
      CHECK(audit.failures == 0);
      CHECK(pt.domination_violations == 0);
      for (tvm::VertexId x = 0; x < s.size(); ++x) {
        if (tvm::in_threshold_set(pt.lower_initial, x)) {
          CHECK(tvm::in_threshold_set(pt.upper_initial, x));
        }
      }
    }
  }
}

TEST_CASE("coupled marginals match the exact chain") {
  // 2-dimensional torus of side 2 (4 spins) and the 4-cycle.
  const double t = 1.0;
  const int reps = 40000;
  for (auto [d, r] : {std::pair{2, 2}, {1, 4}}) {
    const TorusShape s(d, r);
    const double p = 0.4;
    const double p2 = 0.6;
    Moments upper_ez;
    Moments lower_mono;
    Moments upper_mono;
    for (int i = 0; i < reps; ++i) {
      tvm::RngStream rng(38 + d, i);
      const auto ez = tvm::coupled_run_eta_zeta(s, p, t, rng);
      upper_ez.add(ez.upper().final_state().count_ones());
      const auto mono = tvm::coupled_run_monotone(s, p, p2, t, rng);
      lower_mono.add(mono.lower().final_state().count_ones());
      upper_mono.add(mono.upper().final_state().count_ones());
    }
    const double exact_p = tvm::ctmc_mean_ones(s, p, t);
    const double exact_p2 = tvm::ctmc_mean_ones(s, p2, t);
    CHECK(std::abs(upper_ez.mean() - exact_p) < 3 * upper_ez.se());
    CHECK(std::abs(lower_mono.mean() - exact_p) < 3 * lower_mono.se());
    CHECK(std::abs(upper_mono.mean() - exact_p2) < 3 * upper_mono.se());
  }
}

TEST_CASE("death-process law and martingale") {
  const TorusShape s(6, 2);
  const double p = 0.4;
  const double times[] = {0.5, 1.0, 2.0};
  Moments g[3];
  Moments ratio[3];
  for (int i = 0; i < 3000; ++i) {
    tvm::RngStream rng(39, i);
    const auto pt = tvm::coupled_run_eta_zeta(s, p, 2.0, rng);
    const auto lower = tvm::ones_series(pt.lower());
    for (int k = 0; k < 3; ++k) {
      const double v = lower.value_at(times[k]);
      g[k].add(v);
      ratio[k].add(v / (p * std::exp(-times[k])));
    }
  }
  for (int k = 0; k < 3; ++k) {
    const auto law = tvm::death_law(s, p, times[k]);
    CHECK(std::abs(g[k].mean() - law.mean) < 3 * g[k].se());
    CHECK(std::abs(g[k].var() - law.variance) < 4 * g[k].var_se());
    CHECK(std::abs(ratio[k].mean() - s.size()) < 3 * ratio[k].se());
  }
}

TEST_CASE("survival records") {
  const TorusShape s(3, 3);
  tvm::RngStream rng(40, 0);
  {
    const Configuration ones(s, std::vector<std::uint8_t>(27, 1));
    tvm::Simulator sim(ones, tvm::Dynamics::kThreshold);
    const auto rec = tvm::survival_times(tvm::run(sim, 4.0, rng));
    CHECK(rec.vertices.size() == 27);
    for (double tau : rec.tau) CHECK(tau == tvm::SurvivalRecord::kCensored);
    CHECK(rec.surviving_at(4.0) == 27);
  }
  for (int i = 0; i < 30; ++i) {
    tvm::RngStream r2(40, i + 1);
    tvm::Simulator sim(tvm::sample_product(s, 0.45, r2), tvm::Dynamics::kThreshold,
                       tvm::Engine::kUniformRejection);
    const auto traj = tvm::run(sim, 2.0, r2, {.record_idle_rings = true});
    const auto rec = tvm::survival_times(traj);
    CHECK(rec.rings_known);
    CHECK(rec.vertices.size() == traj.initial.count_ones());
    for (std::size_t j = 0; j < rec.vertices.size(); ++j) {
      CHECK(rec.tau[j] >= rec.first_ring[j]);
      if (rec.tau[j] == tvm::SurvivalRecord::kCensored) {
        CHECK(traj.final_state()[rec.vertices[j]] == 1);
      }
    }
    const auto pt = tvm::coupled_run_eta_zeta(s, 0.45, 2.0, r2);
    const auto er = tvm::survival_times(pt);
    for (std::size_t j = 0; j < er.vertices.size(); ++j) CHECK(er.tau[j] >= er.first_ring[j]);
  }
}
