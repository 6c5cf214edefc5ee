#pragma once

// Split-chain Gelman-Rubin diagnostic. Each chain is cut in half and the
// halves are treated as separate chains, so a single chain that drifts
// between its halves is flagged just like disagreeing chains.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bayesdec/draws.hpp"
#include "bayesdec/error.hpp"
#include "bayesdec/stats.hpp"

namespace bayesdec {

inline constexpr double kRhatThreshold = 1.01;

struct ConvergenceReport {
  std::vector<std::string> parameter_names;
  std::vector<double> rhat;      // NaN marks a degenerate (zero-variance) parameter
  std::vector<double> ess_bulk;  // NaN when rhat is degenerate
  std::vector<std::string> notes;
  bool converged = false;

  bool parameter_ok(std::size_t p) const {
    return std::isfinite(rhat[p]) && rhat[p] < kRhatThreshold;
  }
};

namespace detail {

// Autocovariance at a given lag, biased n denominator (matches the usual
// MCMC ESS estimators).
inline double autocovariance(const std::vector<double>& xs, double m, std::size_t lag) {
  const std::size_t n = xs.size();
  double acc = 0.0;
  for (std::size_t i = 0; i + lag < n; ++i) acc += (xs[i] - m) * (xs[i + lag] - m);
  return acc / static_cast<double>(n);
}

// Bulk effective sample size over the split half-chains, Geyer initial
// monotone sequence truncation.
inline double ess_from_halves(const std::vector<std::vector<double>>& halves,
                              double w_mean_var, double var_plus) {
  const std::size_t m = halves.size();
  const std::size_t n = halves[0].size();
  std::vector<double> means(m);
  for (std::size_t c = 0; c < m; ++c) means[c] = mean(halves[c]);

  auto mean_acov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m; ++c) acc += autocovariance(halves[c], means[c], lag);
    return acc / static_cast<double>(m);
  };

  double tau = 1.0;  // rho_0 contribution; pairs added below
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t lag = 1; lag + 1 < n; lag += 2) {
    const double rho_a = 1.0 - (w_mean_var - mean_acov(lag)) / var_plus;
    const double rho_b = 1.0 - (w_mean_var - mean_acov(lag + 1)) / var_plus;
    double pair = rho_a + rho_b;
    if (pair < 0.0) break;
    pair = std::min(pair, prev_pair);  // enforce monotone decay
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  return static_cast<double>(m * n) / tau;
}

}  // namespace detail

// R-hat = sqrt(((n-1)/n * W + B/n) / W) over the 2 * n_chains half-chains,
// where W is the mean within-half variance and B/n the variance of the
// half-chain means. Zero within-chain variance yields a NaN-flagged entry
// with a diagnostic note instead of a crash.
inline ConvergenceReport split_rhat(const PosteriorDraws& draws) {
  if (draws.n_chains() < 2)
    throw ValidationError("split_rhat needs at least 2 chains");
  if (draws.n_kept() < 4)
    throw ValidationError("split_rhat needs at least 4 kept iterations per chain");

  const std::size_t half = draws.n_kept() / 2;  // odd counts drop the middle draw
  ConvergenceReport report;
  report.parameter_names = draws.parameter_names();
  report.converged = true;

  for (std::size_t p = 0; p < draws.n_params(); ++p) {
    std::vector<std::vector<double>> halves;
    for (std::size_t c = 0; c < draws.n_chains(); ++c) {
      const std::vector<double> chain = draws.chain_values(c, p);
      halves.emplace_back(chain.begin(), chain.begin() + half);
      halves.emplace_back(chain.end() - static_cast<std::ptrdiff_t>(half), chain.end());
    }
    std::vector<double> means, vars;
    for (const auto& h : halves) {
      means.push_back(mean(h));
      vars.push_back(sample_variance(h));
    }
    const double w = mean(vars);
    const double b_over_n = sample_variance(means);
    const double n = static_cast<double>(half);
    if (w <= 0.0) {
      report.rhat.push_back(std::numeric_limits<double>::quiet_NaN());
      report.ess_bulk.push_back(std::numeric_limits<double>::quiet_NaN());
      report.notes.push_back("parameter '" + draws.parameter_names()[p] +
                             "' has zero within-chain variance; R-hat undefined");
      report.converged = false;
      continue;
    }
    const double var_plus = (n - 1.0) / n * w + b_over_n;
    const double rhat = std::sqrt(var_plus / w);
    report.rhat.push_back(rhat);
    report.ess_bulk.push_back(detail::ess_from_halves(halves, w, var_plus));
    if (!(rhat < kRhatThreshold)) report.converged = false;
  }
  return report;
}

}  // namespace bayesdec
