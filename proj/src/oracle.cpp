#include "tvm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "tvm/errors.hpp"

namespace tvm {

namespace {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double log_binom_pmf(int n, int j, double log_p, double log_q) {
  return std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) + j * log_p +
         (n - j) * log_q;
}

void check_density(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("density must lie in [0, 1], got " + std::to_string(p));
  }
}

/// pmf of sum_y m(y) eta(y) over independent Bernoulli(p) spins.
std::vector<double> weighted_sum_pmf(const std::vector<int>& weights, double p) {
  int max_sum = 0;
  for (int w : weights) max_sum += w;
  std::vector<double> pmf(static_cast<std::size_t>(max_sum) + 1, 0.0);
  pmf[0] = 1.0;
  int reach = 0;
  for (int w : weights) {
    for (int s = reach; s >= 0; --s) {
      const double mass = pmf[static_cast<std::size_t>(s)];
      pmf[static_cast<std::size_t>(s)] = mass * (1.0 - p);
      pmf[static_cast<std::size_t>(s + w)] += mass * p;
    }
    reach += w;
  }
  return pmf;
}

/// P(sum >= k) from a pmf; k <= 0 gives 1.
double pmf_tail(const std::vector<double>& pmf, int k) {
  if (k <= 0) return 1.0;
  CompensatedSum acc;
  for (std::size_t s = static_cast<std::size_t>(k); s < pmf.size(); ++s) acc.add(pmf[s]);
  return acc.value();
}

std::map<VertexId, int> neighbor_multiplicities(const TorusShape& shape, VertexId x) {
  std::map<VertexId, int> out;
  shape.for_each_neighbor(x, [&](VertexId y) { ++out[y]; });
  return out;
}

}  // namespace

double log_binom_tail(int n, double p, int k) {
  check_density(p);
  if (n < 0) throw DomainError("binomial trial count must be nonnegative");
  if (k < 0 || k > n + 1) {
    throw DomainError("tail index " + std::to_string(k) + " outside [0, " +
                      std::to_string(n + 1) + "]");
  }
  if (k == 0) return 0.0;
  if (k == n + 1) return -std::numeric_limits<double>::infinity();
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return 0.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(n - k + 1));
  for (int j = k; j <= n; ++j) logs.push_back(log_binom_pmf(n, j, log_p, log_q));
  const double top = *std::max_element(logs.begin(), logs.end());
  CompensatedSum acc;
  for (double l : logs) acc.add(std::exp(l - top));
  return top + std::log(acc.value());
}

double binom_tail(int n, double p, int k) {
  const double lt = log_binom_tail(n, p, k);
  return std::min(1.0, std::exp(lt));
}

double neighbor_sum_tail(int dim, int side, double p, int k) {
  check_density(p);
  if (dim < 1 || side < 2) throw DomainError("torus needs d >= 1 and r >= 2");
  if (k <= 0) return 1.0;
  if (k > 2 * dim) return 0.0;
  if (side == 2) return binom_tail(dim, p, (k + 1) / 2);
  return binom_tail(2 * dim, p, k);
}

double neighbor_sum_tail(const TorusShape& shape, double p, int k) {
  return neighbor_sum_tail(shape.dim(), shape.side(), p, k);
}

LdpConstants ldp_constants(double p, int r) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("rate constants need 0 < p < 1, got " + std::to_string(p));
  }
  if (r < 2) throw DomainError("side length must be at least 2");
  const double rate = -std::log(4.0 * p * (1.0 - p));
  const double gap = std::log(static_cast<double>(r)) - rate;
  return {rate, gap / 2.0, gap > 0.0};
}

ExpectedCounts expected_counts(const TorusShape& shape, double p, int k) {
  check_density(p);
  if (k < 0 || k > shape.degree()) {
    throw DomainError("neighbor-count threshold " + std::to_string(k) + " outside [0, 2d]");
  }
  const double n = shape.size();
  return {n * neighbor_sum_tail(shape, p, k), n * neighbor_sum_tail(shape, p, shape.dim())};
}

double exact_var_threshold_set(const TorusShape& shape, double p) {
  check_density(p);
  const int d = shape.dim();
  const VertexId origin = 0;
  const auto mult_o = neighbor_multiplicities(shape, origin);

  std::vector<int> all_o;
  for (auto [y, m] : mult_o) all_o.push_back(m);
  const double q = pmf_tail(weighted_sum_pmf(all_o, p), d);

  CompensatedSum cov;
  for (VertexId z : shape.two_hop_set(origin)) {
    const auto mult_z = neighbor_multiplicities(shape, z);
    std::vector<std::pair<int, int>> shared;  // (mult at origin, mult at z)
    std::vector<int> rest_o;
    std::vector<int> rest_z;
    for (auto [y, m] : mult_o) {
      auto it = mult_z.find(y);
      if (it != mult_z.end()) {
        shared.emplace_back(m, it->second);
      } else {
        rest_o.push_back(m);
      }
    }
    for (auto [y, m] : mult_z) {
      if (!mult_o.count(y)) rest_z.push_back(m);
    }
    const auto pmf_o = weighted_sum_pmf(rest_o, p);
    const auto pmf_z = weighted_sum_pmf(rest_z, p);

    CompensatedSum joint;
    const std::uint32_t patterns = 1u << shared.size();
    for (std::uint32_t mask = 0; mask < patterns; ++mask) {
      double weight = 1.0;
      int sum_o = 0;
      int sum_z = 0;
      for (std::size_t i = 0; i < shared.size(); ++i) {
        if (mask >> i & 1u) {
          weight *= p;
          sum_o += shared[i].first;
          sum_z += shared[i].second;
        } else {
          weight *= 1.0 - p;
        }
      }
      if (weight == 0.0) continue;
      joint.add(weight * pmf_tail(pmf_o, d - sum_o) * pmf_tail(pmf_z, d - sum_z));
    }
    cov.add(joint.value() - q * q);
  }
  const double n = shape.size();
  return n * (q - q * q) + n * cov.value();
}

CtmcModel::CtmcModel(TorusShape shape) : shape_{std::move(shape)} {
  if (shape_.size() > kMaxSpins) {
    throw CapacityError("exact solver handles at most " + std::to_string(kMaxSpins) +
                        " spins, torus has " + std::to_string(shape_.size()));
  }
  const auto n = shape_.size();
  const int d = shape_.dim();
  std::vector<std::vector<VertexId>> nbrs(n);
  for (VertexId x = 0; x < n; ++x) nbrs[x] = shape_.neighbors(x);
  flips_.resize(static_cast<std::size_t>(states()));
  for (std::uint64_t s = 0; s < states(); ++s) {
    std::uint32_t mask = 0;
    for (VertexId x = 0; x < n; ++x) {
      const auto own = static_cast<int>(s >> x & 1u);
      int disagree = 0;
      for (VertexId y : nbrs[x]) disagree += static_cast<int>(s >> y & 1u) != own;
      if (disagree >= d) mask |= 1u << x;
    }
    flips_[static_cast<std::size_t>(s)] = mask;
  }
}

std::uint32_t CtmcModel::encode(const Configuration& cfg) {
  std::uint32_t s = 0;
  for (VertexId x = 0; x < cfg.size(); ++x) s |= static_cast<std::uint32_t>(cfg[x]) << x;
  return s;
}

std::vector<double> CtmcModel::point_distribution(const Configuration& cfg) const {
  if (!(cfg.shape() == shape_)) throw PreconditionError("configuration on a different torus");
  std::vector<double> dist(static_cast<std::size_t>(states()), 0.0);
  dist[encode(cfg)] = 1.0;
  return dist;
}

std::vector<double> CtmcModel::product_distribution(double p) const {
  check_density(p);
  std::vector<double> dist(static_cast<std::size_t>(states()));
  for (std::uint64_t s = 0; s < states(); ++s) {
    const int ones = std::popcount(static_cast<std::uint32_t>(s));
    dist[static_cast<std::size_t>(s)] =
        std::pow(p, ones) * std::pow(1.0 - p, static_cast<int>(spins()) - ones);
  }
  return dist;
}

double CtmcModel::mean_ones(std::span<const double> dist, double t, double tolerance,
                            std::uint64_t max_terms) const {
  if (dist.size() != states()) throw PreconditionError("distribution has the wrong length");
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  const double lambda = uniformization_rate();
  const double lt = lambda * t;
  const double n = spins();

  auto mean_of = [&](const std::vector<double>& v) {
    CompensatedSum acc;
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (v[s] != 0.0) acc.add(v[s] * std::popcount(static_cast<std::uint32_t>(s)));
    }
    return acc.value();
  };

  std::vector<double> cur(dist.begin(), dist.end());
  std::vector<double> next(cur.size());
  CompensatedSum result;
  CompensatedSum mass;
  for (std::uint64_t k = 0; k < max_terms; ++k) {
    const double log_w = k == 0 && lt == 0.0
                             ? 0.0
                             : -lt + static_cast<double>(k) * std::log(lt) - std::lgamma(k + 1.0);
    const double w = std::exp(log_w);
    result.add(w * mean_of(cur));
    mass.add(w);
    if ((1.0 - mass.value()) * n <= tolerance && static_cast<double>(k) >= lt) break;
    if (lt == 0.0) break;

    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < cur.size(); ++s) {
      const double v = cur[s];
      if (v == 0.0) continue;
      std::uint32_t mask = flips_[s];
      const double move = v / lambda;
      next[s] += v - move * std::popcount(mask);
      while (mask) {
        const std::uint32_t bit = mask & (~mask + 1u);
        next[s ^ bit] += move;
        mask ^= bit;
      }
    }
    cur.swap(next);
  }
  return result.value();
}

std::vector<double> CtmcModel::mean_ones(std::span<const double> dist,
                                         std::span<const double> times, double tolerance) const {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(mean_ones(dist, t, tolerance));
  return out;
}

double ctmc_mean_ones(const Configuration& initial, double t) {
  const CtmcModel model(initial.shape());
  return model.mean_ones(model.point_distribution(initial), t);
}

double ctmc_mean_ones(const TorusShape& shape, double p, double t) {
  const CtmcModel model(shape);
  return model.mean_ones(model.product_distribution(p), t);
}

DeathLaw death_law(const TorusShape& shape, double p, double t) {
  check_density(p);
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  const double s = p * std::exp(-t);
  const double n = shape.size();
  return {shape.size(), s, n * s, n * s * (1.0 - s)};
}

std::vector<LdpPoint> ldp_convergence(double p, int d_max) {
  if (!(p > 0.0 && p < 0.5)) {
    throw DomainError("rate sequence needs 0 < p < 1/2, got " + std::to_string(p));
  }
  if (d_max < 1) throw DomainError("d_max must be at least 1");
  const double rate = ldp_constants(p, 2).rate;
  std::vector<LdpPoint> out;
  out.reserve(static_cast<std::size_t>(d_max));
  for (int d = 1; d <= d_max; ++d) {
    const double value = -log_binom_tail(2 * d, p, d) / d;
    out.push_back({d, value, std::abs(value - rate)});
  }
  return out;
}

}  // namespace tvm
