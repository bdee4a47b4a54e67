#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tvm/errors.hpp"
#include "tvm/observables.hpp"
#include "tvm/oracle.hpp"
#include "tvm/simulator.hpp"

using tvm::Configuration;
using tvm::Dynamics;
using tvm::Engine;
using tvm::Simulator;
using tvm::TorusShape;

namespace {

Configuration ring(std::vector<std::uint8_t> bits) {
  const int r = static_cast<int>(bits.size());
  return Configuration(TorusShape(1, r), std::move(bits));
}

}  // namespace

TEST_CASE("active set examples") {
  Simulator a(ring({1, 0, 0, 0}), Dynamics::kThreshold);
  CHECK(a.active().size() == 3);
  CHECK(a.active().contains(0));
  CHECK(a.active().contains(1));
  CHECK(a.active().contains(3));
  CHECK_FALSE(a.active().contains(2));

  Simulator b(ring({1, 0, 1, 0}), Dynamics::kThreshold);
  CHECK(b.active().size() == 4);

  Simulator c(ring({0, 0, 0, 0}), Dynamics::kThreshold);
  CHECK(c.absorbed());
  tvm::RngStream rng(1, 0);
  CHECK_FALSE(c.step(rng, 5.0).has_value());
  CHECK(c.time() == 5.0);
}

TEST_CASE("absorbing and death runs") {
  tvm::RngStream rng(2, 0);
  const TorusShape s(3, 3);
  Simulator ones(Configuration(s, std::vector<std::uint8_t>(s.size(), 1)), Dynamics::kThreshold);
  CHECK(tvm::run(ones, 10.0, rng).events.empty());

  Simulator death(Configuration(s, std::vector<std::uint8_t>(s.size(), 1)), Dynamics::kDeath);
  const auto traj = tvm::run(death, 1e6, rng);
  CHECK(traj.events.size() == s.size());
  CHECK(traj.final_state().count_ones() == 0);

  CHECK_THROWS_AS(tvm::run(death, 1e6, rng), tvm::DomainError);
}

TEST_CASE("death event count is Binomial(n, p(1 - e^-T))") {
  const TorusShape s(4, 3);
  const double p = 0.6;
  const double horizon = 0.7;
  const int reps = 4000;
  double sum = 0.0;
  for (int i = 0; i < reps; ++i) {
    tvm::RngStream rng(3, i);
    Simulator sim(tvm::sample_product(s, p, rng), Dynamics::kDeath);
    sum += static_cast<double>(tvm::run(sim, horizon, rng).events.size());
  }
  const double q = p * (1 - std::exp(-horizon));
  const double n = s.size();
  CHECK(std::abs(sum / reps - n * q) < 3 * std::sqrt(n * q * (1 - q) / reps));
}

TEST_CASE("trajectory replay and determinism") {
  const TorusShape s(3, 4);
  auto go = [&](Engine e) {
    tvm::RngStream rng(4, 9);
    Simulator sim(tvm::sample_product(s, 0.45, rng), Dynamics::kThreshold, e);
    return tvm::run(sim, 3.0, rng, {.record_events = true, .record_idle_rings = true});
  };
  for (Engine e : {Engine::kActiveSet, Engine::kUniformRejection}) {
    const auto a = go(e);
    const auto b = go(e);
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
      CHECK(a.events[i].time == b.events[i].time);
      CHECK(a.events[i].vertex == b.events[i].vertex);
    }
    Configuration cfg = a.initial;
    double last = 0.0;
    for (const auto& ev : a.events) {
      CHECK(ev.time > last);
      CHECK(ev.time <= 3.0);
      CHECK(tvm::threshold_rate(cfg, ev.vertex) == 1);
      cfg.flip(ev.vertex);
      CHECK(cfg[ev.vertex] == ev.new_value);
      CHECK(a.state_at(ev.time) == cfg);
      last = ev.time;
    }
    CHECK(a.final_state() == cfg);
    CHECK_NOTHROW(cfg.verify_counts());
    CHECK(a.rings_observed == (e == Engine::kUniformRejection));
    if (e == Engine::kUniformRejection) CHECK_FALSE(a.idle_rings.empty());
  }
}

TEST_CASE("idle rings never hit an active vertex") {
  const TorusShape s(2, 4);
  tvm::RngStream rng(5, 0);
  Simulator sim(tvm::sample_product(s, 0.5, rng), Dynamics::kThreshold, Engine::kUniformRejection);
  const auto traj = tvm::run(sim, 2.0, rng, {.record_events = true, .record_idle_rings = true});
  for (const auto& ring : traj.idle_rings) {
    CHECK(tvm::threshold_rate(traj.state_at(ring.time), ring.vertex) == 0);
  }
}

// Both engines against the exact generator on the 3- and 4-cycles.
TEST_CASE("thinning equivalence against the exact chain") {
  struct Case {
    std::vector<std::uint8_t> bits;
  };
  const std::vector<Case> cases{{{1, 1, 0}}, {{1, 0, 0, 0}}, {{1, 1, 0, 0}}};
  const double times[] = {0.5, 1.0, 2.0};
  const int reps = 100000;
  int case_index = 0;
  for (const auto& c : cases) {
    const auto init = ring(c.bits);
    const int r = static_cast<int>(c.bits.size());
    std::uint64_t code = 0;
    for (int x = 0; x < r; ++x) code |= std::uint64_t{c.bits[x]} << x;
    for (Engine e : {Engine::kActiveSet, Engine::kUniformRejection}) {
      std::vector<double> sum(3, 0.0);
      std::vector<double> sum2(3, 0.0);
      for (int i = 0; i < reps; ++i) {
        tvm::RngStream rng(600 + case_index, i);
        Simulator sim(init, Dynamics::kThreshold, e);
        tvm::OnesCountRecorder ones;
        tvm::Observer* obs[] = {&ones};
        tvm::run(sim, 2.0, obs, rng, {.record_events = false});
        for (int k = 0; k < 3; ++k) {
          const double v = ones.series().value_at(times[k]);
          sum[k] += v;
          sum2[k] += v * v;
        }
      }
      for (int k = 0; k < 3; ++k) {
        const double mean = sum[k] / reps;
        const double se = std::sqrt((sum2[k] / reps - mean * mean) / reps);
        const double exact = oracle::mean_ones(code, 1, r, times[k]);
        CHECK(std::abs(tvm::ctmc_mean_ones(init, times[k]) - exact) < 1e-9);
        CHECK_MESSAGE(std::abs(mean - exact) < 3 * se,
                      "r=" << r << " t=" << times[k] << " mc=" << mean << " exact=" << exact);
      }
      ++case_index;
    }
  }
}
