#pragma once

#include <cmath>
#include <limits>

#include "bayesdec/error.hpp"

namespace bayesdec {

// Maps log odds onto a probability, overflow-safe for any finite x and for
// +/-infinity. NaN is rejected rather than propagated: every caller feeds the
// result into a loss or a report where a silent NaN would poison the decision.
inline double inv_logit(double x) {
  if (std::isnan(x)) throw ValidationError("inv_logit: NaN input");
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// ln(p / (1-p)); logit(0) = -inf, logit(1) = +inf.
inline double logit(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0)
    throw ValidationError("logit: input outside [0, 1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return std::log(p) - std::log1p(-p);
}

// log(1 + e^x) without overflow; the Bernoulli log-likelihood term.
inline double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace bayesdec
