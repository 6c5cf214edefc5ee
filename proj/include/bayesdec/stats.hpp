#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bayesdec/error.hpp"

namespace bayesdec {

// Neumaier-compensated sum. Partition identities in the effects module are
// asserted to 1e-12 relative, which plain left-to-right summation does not
// guarantee at 1e4+ terms.
inline double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw ValidationError("mean of empty range");
  return compensated_sum(xs) / static_cast<double>(xs.size());
}

// Sample variance (n-1 denominator), two-pass.
inline double sample_variance(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw ValidationError("variance needs at least 2 values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) {
    const double d = x - m;
    ss += d * d;
  }
  return ss / static_cast<double>(n - 1);
}

inline double sample_sd(std::span<const double> xs) {
  return std::sqrt(sample_variance(xs));
}

// Linear-interpolation quantile (R type 7). `q` in [0, 1].
inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw ValidationError("quantile of empty range");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level outside [0, 1]");
  std::sort(xs.begin(), xs.end());
  const double h = q * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

inline double normal_pdf(double x) {
  return 0.3989422804014326779399460599344 * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244008443621048);
}

}  // namespace bayesdec
