#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "tvm/configuration.hpp"
#include "tvm/torus.hpp"

namespace tvm {

/// P(Binomial(n, p) >= k) for 0 <= k <= n + 1, summed in log space with
/// compensated accumulation. Throws DomainError for k outside that range or
/// p outside [0, 1].
double binom_tail(int n, double p, int k);

/// log P(Binomial(n, p) >= k); -infinity when the tail is empty.
double log_binom_tail(int n, double p, int k);

/// P(ones-neighbor count of a fixed vertex >= k) under the product measure,
/// counting multiplicity: Bin(2d, p) for r >= 3, 2 * Bin(d, p) for r = 2.
double neighbor_sum_tail(const TorusShape& shape, double p, int k);

/// Same law from (d, r) alone, for tori too large to index.
double neighbor_sum_tail(int dim, int side, double p, int k);

struct LdpConstants {
  double rate;      // K(p) = -log(4p(1-p))
  double growth;    // C(p) = (log r - K(p)) / 2
  bool admissible;  // log r - K(p) > 0, i.e. 4p(1-p) > 1/r
};

/// Throws DomainError unless 0 < p < 1.
LdpConstants ldp_constants(double p, int r);

struct ExpectedCounts {
  double at_least_k;     // E|I_0(k)|
  double threshold_set;  // E|C_0| = E|I_0(d)|
};

/// Expectations under the product measure. Throws DomainError unless
/// 0 <= k <= 2d.
ExpectedCounts expected_counts(const TorusShape& shape, double p, int k);

/// Var(|C_0|) under the product measure, exactly. Pairs of vertices without
/// a common neighbor are independent; for every other displacement the joint
/// tail is computed by conditioning on the spins of the shared neighbors and
/// convolving the disjoint remainders.
double exact_var_threshold_set(const TorusShape& shape, double p);

/// Exact generator of the threshold voter model on a torus with at most
/// kMaxSpins spins, solved by uniformization at rate n.
class CtmcModel {
 public:
  static constexpr std::uint32_t kMaxSpins = 20;

  /// Throws CapacityError when r^d > kMaxSpins.
  explicit CtmcModel(TorusShape shape);

  const TorusShape& shape() const noexcept { return shape_; }
  std::uint32_t spins() const noexcept { return shape_.size(); }
  std::uint64_t states() const noexcept { return std::uint64_t{1} << spins(); }
  double uniformization_rate() const noexcept { return static_cast<double>(spins()); }

  /// Bit x of the mask is set iff vertex x has flip rate 1 in `state`.
  std::uint32_t flip_mask(std::uint32_t state) const noexcept { return flips_[state]; }

  static std::uint32_t encode(const Configuration& cfg);

  std::vector<double> point_distribution(const Configuration& cfg) const;
  std::vector<double> product_distribution(double p) const;

  /// E|A_t| from the initial distribution `dist`. The Poisson series stops
  /// once the neglected mass times n is below `tolerance`, or after
  /// `max_terms` terms if that comes first.
  double mean_ones(std::span<const double> dist, double t, double tolerance = 1e-10,
                   std::uint64_t max_terms = std::numeric_limits<std::uint64_t>::max()) const;

  /// Same series evaluated on several times in one pass per time.
  std::vector<double> mean_ones(std::span<const double> dist, std::span<const double> times,
                                double tolerance = 1e-10) const;

 private:
  TorusShape shape_;
  std::vector<std::uint32_t> flips_;
};

double ctmc_mean_ones(const Configuration& initial, double t);
double ctmc_mean_ones(const TorusShape& shape, double p, double t);

/// Law of the number of surviving ones in the death process at time t.
struct DeathLaw {
  std::uint64_t trials;
  double success;
  double mean;
  double variance;
};

DeathLaw death_law(const TorusShape& shape, double p, double t);

struct LdpPoint {
  int dim;
  double value;  // -(1/d) log P(Bin(2d, p) >= d)
  double drift;  // |value - K(p)|
};

/// Exact rate sequence for d = 1..d_max. Throws DomainError unless 0 < p < 1/2.
std::vector<LdpPoint> ldp_convergence(double p, int d_max);

}  // namespace tvm
