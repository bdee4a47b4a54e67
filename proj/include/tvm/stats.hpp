#pragma once

#include <span>

namespace tvm::stats {

double mean(std::span<const double> xs);
/// Unbiased sample variance (n - 1 denominator); 0 for fewer than two samples.
double variance(std::span<const double> xs);
/// Standard error of the mean.
double std_error(std::span<const double> xs);
/// Approximate standard error of the unbiased sample variance,
/// sqrt((m4 - s^4 (n-3)/(n-1)) / n) with m4 the fourth central moment.
double variance_std_error(std::span<const double> xs);
/// Linear-interpolation quantile (type 7), q in [0, 1].
double quantile(std::span<const double> xs, double q);
inline double median(std::span<const double> xs) { return quantile(xs, 0.5); }

}  // namespace tvm::stats
