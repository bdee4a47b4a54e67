// Brute-force reference computations used only by the tests. Nothing here
// calls into the library's neighbor tables or probability code.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

/// 0-based coordinates of vertex x on {0..r-1}^d, little-endian.
inline std::vector<int> coords(std::uint64_t x, int d, int r) {
  std::vector<int> c(d);
  for (int i = 0; i < d; ++i) {
    c[i] = static_cast<int>(x % r);
    x /= r;
  }
  return c;
}

inline std::uint64_t index(const std::vector<int>& c, int r) {
  std::uint64_t x = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) x = x * r + c[i];
  return x;
}

inline std::uint64_t ipow(int r, int d) {
  std::uint64_t n = 1;
  for (int i = 0; i < d; ++i) n *= r;
  return n;
}

/// All 2d neighbor slots of x, by coordinate arithmetic.
inline std::vector<std::uint64_t> neighbor_slots(std::uint64_t x, int d, int r) {
  std::vector<std::uint64_t> out;
  const auto c = coords(x, d, r);
  for (int i = 0; i < d; ++i) {
    for (int s : {1, r - 1}) {
      auto y = c;
      y[i] = (y[i] + s) % r;
      out.push_back(index(y, r));
    }
  }
  return out;
}

inline int ones_neighbors(std::uint64_t state, std::uint64_t x, int d, int r) {
  int k = 0;
  for (auto y : neighbor_slots(x, d, r)) k += static_cast<int>(state >> y & 1u);
  return k;
}

inline bool flips(std::uint64_t state, std::uint64_t x, int d, int r) {
  const int ones = ones_neighbors(state, x, d, r);
  return (state >> x & 1u) ? (2 * d - ones >= d) : (ones >= d);
}

inline double weight(std::uint64_t state, int n, double p) {
  double w = 1.0;
  for (int x = 0; x < n; ++x) w *= (state >> x & 1u) ? p : 1.0 - p;
  return w;
}

struct Moments {
  double mean;
  double var;
};

/// Mean and variance of #{x : ones_nbr(x) >= k} over all 2^(r^d) states.
inline Moments at_least_moments(int d, int r, double p, int k) {
  const int n = static_cast<int>(ipow(r, d));
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    int count = 0;
    for (int x = 0; x < n; ++x) count += ones_neighbors(s, x, d, r) >= k;
    const double w = weight(s, n, p);
    m1 += w * count;
    m2 += w * count * count;
  }
  return {m1, m2 - m1 * m1};
}

using Matrix = std::vector<std::vector<double>>;

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const auto n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// exp(Q t) by scaling and squaring with a long Taylor series.
inline Matrix expm(Matrix q, double t) {
  const auto n = q.size();
  int squarings = 0;
  double norm = 0.0;
  for (auto& row : q)
    for (double& v : row) norm = std::max(norm, std::abs(v * t));
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  const double h = t / std::ldexp(1.0, squarings);
  Matrix result(n, std::vector<double>(n, 0.0));
  Matrix term(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = term[i][i] = 1.0;
  for (auto& row : q)
    for (double& v : row) v *= h;
  for (int k = 1; k < 30; ++k) {
    term = multiply(term, q);
    for (auto& row : term)
      for (double& v : row) v /= k;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) result[i][j] += term[i][j];
  }
  for (int s = 0; s < squarings; ++s) result = multiply(result, result);
  return result;
}

/// E|A_t| of the threshold voter model from a fixed state, by dense matrix
/// exponential of the full generator. Small tori only.
inline double mean_ones(std::uint64_t start, int d, int r, double t) {
  const int n = static_cast<int>(ipow(r, d));
  const std::size_t states = std::size_t{1} << n;
  Matrix q(states, std::vector<double>(states, 0.0));
  for (std::uint64_t s = 0; s < states; ++s) {
    for (int x = 0; x < n; ++x) {
      if (flips(s, x, d, r)) {
        q[s][s ^ (std::uint64_t{1} << x)] += 1.0;
        q[s][s] -= 1.0;
      }
    }
  }
  const auto e = expm(q, t);
  double m = 0.0;
  for (std::uint64_t s = 0; s < states; ++s) {
    m += e[start][s] * __builtin_popcountll(s);
  }
  return m;
}

/// Closed form on the 3-cycle from two ones: lumping by the number of ones
/// gives rates 1->0: 1, 1->2: 2, 2->1: 2, 2->3: 1 and the mean 1.8 + 0.2 e^{-5t}.
inline double cycle3_mean_from_two(double t) { return 1.8 + 0.2 * std::exp(-5.0 * t); }

inline double binom_tail(int n, double p, int k) {
  double s = 0.0;
  for (int j = k; j <= n; ++j) {
    s += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0)) *
         std::pow(p, j) * std::pow(1.0 - p, n - j);
  }
  return s;
}

}  // namespace oracle
