#include <tuple>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tvm/errors.hpp"
#include "tvm/oracle.hpp"

using tvm::TorusShape;

TEST_CASE("binomial tail examples") {
  CHECK(tvm::binom_tail(2, 0.4, 1) == doctest::Approx(0.64).epsilon(1e-14));
  CHECK(tvm::binom_tail(4, 0.5, 2) == doctest::Approx(0.6875).epsilon(1e-14));
  for (int n : {0, 1, 7, 300}) CHECK(tvm::binom_tail(n, 0.37, 0) == 1.0);
  CHECK(tvm::binom_tail(5, 0.3, 6) == 0.0);
  CHECK_THROWS_AS(tvm::binom_tail(5, 0.3, 7), tvm::DomainError);
  CHECK_THROWS_AS(tvm::binom_tail(5, 0.3, -1), tvm::DomainError);
  CHECK_THROWS_AS(tvm::binom_tail(5, 1.3, 2), tvm::DomainError);
  for (int n : {3, 10, 40}) {
    for (int k = 0; k <= n; ++k) {
      CHECK(tvm::binom_tail(n, 0.27, k) == doctest::Approx(oracle::binom_tail(n, 0.27, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("rate constants") {
  CHECK(tvm::ldp_constants(0.5, 2).rate == doctest::Approx(0.0));
  CHECK(tvm::ldp_constants(0.4, 2).rate == doctest::Approx(0.0408220).epsilon(1e-6));
  const auto c = tvm::ldp_constants(0.45, 2);
  CHECK(c.rate == doctest::Approx(0.0100503).epsilon(1e-6));
  CHECK(c.growth == doctest::Approx(0.3415485).epsilon(1e-6));
  CHECK(c.admissible);
  CHECK_FALSE(tvm::ldp_constants(0.1, 2).admissible);
  CHECK_THROWS_AS(tvm::ldp_constants(0.0, 2), tvm::DomainError);
}

TEST_CASE("expected counts examples") {
  CHECK(tvm::expected_counts(TorusShape(1, 3), 0.5, 1).threshold_set == doctest::Approx(2.25));
  CHECK(tvm::expected_counts(TorusShape(3, 4), 0.3, 0).at_least_k == 64.0);
  CHECK(tvm::expected_counts(TorusShape(3, 4), 0.0, 2).threshold_set == 0.0);
  CHECK_THROWS_AS(tvm::expected_counts(TorusShape(2, 4), 0.3, 5), tvm::DomainError);
}

TEST_CASE("variance examples") {
  CHECK(tvm::exact_var_threshold_set(TorusShape(1, 3), 0.5) == doctest::Approx(0.9375).epsilon(1e-14));
  for (double p : {0.0, 1.0}) {
    CHECK(tvm::exact_var_threshold_set(TorusShape(2, 3), p) == doctest::Approx(0.0));
  }
}

TEST_CASE("moments match brute-force enumeration") {
  for (auto [d, r] : {std::pair{1, 3}, {1, 4}, {1, 5}, {2, 2}, {2, 3}, {3, 2}}) {
    const TorusShape s(d, r);
    for (int i = 1; i <= 9; ++i) {
      const double p = i / 10.0;
      const auto bf = oracle::at_least_moments(d, r, p, d);
      CHECK(std::abs(tvm::exact_var_threshold_set(s, p) - bf.var) < 1e-12);
      CHECK(std::abs(tvm::expected_counts(s, p, d).threshold_set - bf.mean) < 1e-12);
      for (int k = 0; k <= 2 * d; ++k) {
        const auto bk = oracle::at_least_moments(d, r, p, k);
        CHECK(std::abs(tvm::expected_counts(s, p, k).at_least_k - bk.mean) < 1e-12);
      }
    }
  }
}

TEST_CASE("variance stays below the pair-count bound") {
  for (auto [d, r] : {std::pair{4, 3}, {6, 2}, {3, 5}}) {
    const TorusShape s(d, r);
    const double p = 0.4;
    const double mean = tvm::expected_counts(s, p, d).threshold_set;
    const double q = mean / s.size();
    const double var = tvm::exact_var_threshold_set(s, p);
    // Covariance of two indicators is at most q(1 - q).
    const double bound = mean + 2.0 * d * d * s.size() * q * (1 - q);
    MESSAGE("d=" << d << " r=" << r << " var=" << var << " bound=" << bound);
    CHECK(var >= 0.0);
    CHECK(var <= bound);
  }
}

TEST_CASE("exact chain on the 3-cycle") {
  const TorusShape s(1, 3);
  const tvm::Configuration two(s, {1, 1, 0});
  for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(std::abs(tvm::ctmc_mean_ones(two, t) - oracle::cycle3_mean_from_two(t)) < 1e-9);
    CHECK(std::abs(oracle::mean_ones(0b011, 1, 3, t) - oracle::cycle3_mean_from_two(t)) < 1e-9);
  }
  CHECK(tvm::ctmc_mean_ones(two, 1.0) == doctest::Approx(1.801347).epsilon(1e-6));
  const tvm::Configuration all(s, {1, 1, 1});
  for (double t : {0.0, 1.0, 7.0}) CHECK(tvm::ctmc_mean_ones(all, t) == doctest::Approx(3.0));

  // Law of total expectation over the 8 initial states.
  for (double p : {0.2, 0.5, 0.8}) {
    double total = 0.0;
    for (std::uint64_t st = 0; st < 8; ++st) {
      total += oracle::weight(st, 3, p) * oracle::mean_ones(st, 1, 3, 1.3);
    }
    CHECK(std::abs(tvm::ctmc_mean_ones(s, p, 1.3) - total) < 1e-9);
  }
}

TEST_CASE("exact chain against the dense matrix exponential") {
  for (auto [d, r, start] : {std::tuple{1, 4, 0b0001u}, {1, 5, 0b00111u}, {2, 2, 0b0110u},
                             {1, 6, 0b010011u}}) {
    const TorusShape s(d, r);
    std::vector<std::uint8_t> bits(s.size());
    for (std::size_t x = 0; x < bits.size(); ++x) bits[x] = start >> x & 1u;
    const tvm::Configuration cfg(s, bits);
    for (double t : {0.3, 1.0, 2.5}) {
      CHECK(std::abs(tvm::ctmc_mean_ones(cfg, t) - oracle::mean_ones(start, d, r, t)) < 1e-9);
    }
    CHECK(tvm::ctmc_mean_ones(cfg, 0.0) == static_cast<double>(cfg.count_ones()));
  }
}

TEST_CASE("uniformization partial sums increase with depth") {
  const TorusShape s(2, 3);
  const tvm::CtmcModel model(s);
  const auto dist = model.product_distribution(0.35);
  double prev = 0.0;
  for (std::uint64_t terms = 1; terms < 80; ++terms) {
    const double v = model.mean_ones(dist, 2.0, 0.0, terms);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(std::abs(prev - model.mean_ones(dist, 2.0)) < 1e-9);
  CHECK_THROWS_AS(tvm::CtmcModel(TorusShape(1, 21)), tvm::CapacityError);
}

TEST_CASE("death law") {
  const TorusShape s(10, 2);
  const auto at0 = tvm::death_law(s, 0.4, 0.0);
  CHECK(at0.mean == doctest::Approx(1024 * 0.4));
  const auto at1 = tvm::death_law(s, 0.4, 1.0);
  CHECK(at1.mean == doctest::Approx(1024 * 0.4 * std::exp(-1.0)));
  CHECK(at1.variance == doctest::Approx(at1.mean * (1 - 0.4 * std::exp(-1.0))));
  CHECK(at1.variance <= at1.mean);
}

TEST_CASE("rate sequence") {
  const auto seq = tvm::ldp_convergence(0.3, 200);
  const double k = -std::log(0.84);
  CHECK(k == doctest::Approx(0.1743534).epsilon(1e-6));
  CHECK(std::abs(seq.back().value - k) < 0.03);
  for (std::size_t i = 20; i < seq.size(); ++i) CHECK(seq[i].drift < seq[i - 1].drift);
  const auto near_half = tvm::ldp_convergence(0.4999, 400);
  CHECK(near_half.back().value < 0.02);
  CHECK_THROWS_AS(tvm::ldp_convergence(0.5, 10), tvm::DomainError);
  const auto deep = tvm::ldp_convergence(0.05, 600);
  CHECK(std::isfinite(deep.back().value));
}
