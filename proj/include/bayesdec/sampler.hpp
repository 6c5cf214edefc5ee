#pragma once

// Bayesian logistic regression fitted by adaptive random-walk Metropolis.
//
//   y_i ~ Bernoulli(inv_logit(b0 + b1*d_i + x_i . g))
//
// Coefficients get Normal(0, coef_prior_scale / sd(x_j)) priors, so the prior
// adapts to each predictor's measurement scale. Predictors are mean-centered
// while sampling (the intercept prior applies to the centered intercept) and
// every reported draw is back-transformed to the original scale.
//
// Updates are single-site: each sweep proposes a normal step for one
// coefficient at a time, with a per-parameter proposal scale tuned toward
// target_accept by Robbins-Monro during warmup and frozen afterwards. Kept
// draws therefore come from a fixed kernel.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bayesdec/dataset.hpp"
#include "bayesdec/draws.hpp"
#include "bayesdec/error.hpp"
#include "bayesdec/logit.hpp"
#include "bayesdec/rng.hpp"
#include "bayesdec/stats.hpp"

namespace bayesdec {

struct SamplerConfig {
  int n_chains = 4;
  int n_iter = 10000;   // per chain, warmup included
  int n_warmup = 1000;  // discarded and used for proposal adaptation
  std::uint64_t seed = 1;
  double coef_prior_scale = 2.302585092994045684;  // log(10)
  double intercept_prior_sd = 10.0;
  double target_accept = 0.234;

  void validate() const {
    if (n_chains < 1) throw ValidationError("n_chains must be >= 1");
    if (n_iter < 2) throw ValidationError("n_iter must be >= 2");
    if (n_warmup < 1) throw ValidationError("n_warmup must be >= 1");
    if (n_warmup >= n_iter) throw ValidationError("n_warmup must be < n_iter");
    if (!(coef_prior_scale > 0.0)) throw ValidationError("coef_prior_scale must be > 0");
    if (!(intercept_prior_sd > 0.0)) throw ValidationError("intercept_prior_sd must be > 0");
    if (!(target_accept > 0.0 && target_accept < 1.0))
      throw ValidationError("target_accept must lie in (0, 1)");
  }
};

// Per-chain sampling record, mostly for tests and reports. Proposal scales
// are captured at the end of warmup and at the end of sampling; equal values
// demonstrate the adaptation freeze.
struct ChainInfo {
  std::vector<double> accept_rate;            // post-warmup, per parameter
  std::vector<double> scales_at_warmup_end;
  std::vector<double> scales_final;
};

struct LogisticFit {
  PosteriorDraws draws;
  std::vector<ChainInfo> chains;
};

namespace detail {

struct DesignMatrix {
  std::vector<std::string> predictor_names;       // treatment first
  std::vector<std::vector<double>> centered_cols;  // column-major
  std::vector<double> centers;
  std::vector<double> sds;       // sample sd of the original column
  std::vector<double> prior_sd;  // [intercept, predictors...]
  std::vector<double> outcome;
};

// Numerical rank check via modified Gram-Schmidt on the centered columns
// (centering already removes the intercept direction). Columns whose residual
// after projecting on the previous ones nearly vanishes are reported by name.
inline void check_full_rank(const DesignMatrix& design) {
  const std::size_t p = design.centered_cols.size();
  const std::size_t n = design.outcome.size();
  std::vector<std::vector<double>> basis;
  std::vector<std::string> collinear;
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> v = design.centered_cols[j];
    double orig_norm = 0.0;
    for (double x : v) orig_norm += x * x;
    orig_norm = std::sqrt(orig_norm);
    if (orig_norm == 0.0) {
      // constant column; collinear with the intercept
      collinear.push_back(design.predictor_names[j]);
      continue;
    }
    for (const auto& b : basis) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += v[i] * b[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= dot * b[i];
    }
    double res_norm = 0.0;
    for (double x : v) res_norm += x * x;
    res_norm = std::sqrt(res_norm);
    if (res_norm <= 1e-8 * orig_norm) {
      collinear.push_back(design.predictor_names[j]);
      continue;
    }
    for (double& x : v) x /= res_norm;
    basis.push_back(std::move(v));
  }
  if (!collinear.empty()) {
    std::ostringstream msg;
    msg << "design matrix is rank deficient; collinear column"
        << (collinear.size() > 1 ? "s:" : ":");
    for (const auto& name : collinear) msg << " " << name;
    throw ValidationError(msg.str());
  }
}

inline DesignMatrix build_design(const Dataset& data, const SamplerConfig& config) {
  DesignMatrix design;
  design.outcome = data.outcome;
  if (!data.treatment_name.empty()) {
    design.predictor_names.push_back(data.treatment_name);
    design.centered_cols.push_back(data.treatment);
  }
  for (std::size_t j = 0; j < data.n_covariates(); ++j) {
    design.predictor_names.push_back(data.covariate_names[j]);
    design.centered_cols.push_back(data.covariates[j]);
  }
  design.prior_sd.push_back(config.intercept_prior_sd);
  for (auto& col : design.centered_cols) {
    const double c = mean(col);
    double sd = 0.0;
    if (col.size() >= 2) sd = sample_sd(col);
    design.centers.push_back(c);
    design.sds.push_back(sd);
    for (double& x : col) x -= c;
  }
  check_full_rank(design);
  for (std::size_t j = 0; j < design.centered_cols.size(); ++j)
    design.prior_sd.push_back(config.coef_prior_scale / design.sds[j]);
  return design;
}

inline double bernoulli_loglik(const std::vector<double>& y,
                               const std::vector<double>& eta) {
  double ll = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    ll += y[i] * eta[i] - log1p_exp(eta[i]);
  return ll;
}

// One chain of single-site adaptive RWM in the centered parameterization.
// theta[0] is the centered intercept, theta[1..] the slopes.
inline void run_chain(const DesignMatrix& design, const SamplerConfig& config,
                      std::size_t chain_index, PosteriorDraws& draws,
                      ChainInfo& info) {
  const std::size_t n = design.outcome.size();
  const std::size_t n_pred = design.centered_cols.size();
  const std::size_t n_par = n_pred + 1;
  Xoshiro256pp rng =
      Xoshiro256pp::for_stream(config.seed, static_cast<std::uint64_t>(chain_index));

  std::vector<double> theta(n_par, 0.0);
  std::vector<double> eta(n, 0.0), eta_prop(n, 0.0);
  double loglik = 0.0;

  auto initialize = [&]() -> bool {
    for (auto& t : theta) t = 0.5 * rng.normal();
    for (std::size_t i = 0; i < n; ++i) {
      double e = theta[0];
      for (std::size_t j = 0; j < n_pred; ++j)
        e += theta[j + 1] * design.centered_cols[j][i];
      eta[i] = e;
    }
    loglik = bernoulli_loglik(design.outcome, eta);
    return std::isfinite(loglik);
  };
  int attempts = 0;
  while (!initialize()) {
    if (++attempts >= 5)
      throw ValidationError("divergent chain: log-posterior not finite at initialization");
  }

  std::vector<double> log_scale(n_par, 0.0);  // proposal sd = exp(log_scale)
  std::vector<long> accept_count(n_par, 0);

  const int n_kept = config.n_iter - config.n_warmup;
  for (int t = 1; t <= config.n_iter; ++t) {
    const bool warming = t <= config.n_warmup;
    const double adapt_rate = warming ? std::pow(static_cast<double>(t), -0.6) : 0.0;
    for (std::size_t j = 0; j < n_par; ++j) {
      const double step = std::exp(log_scale[j]) * rng.normal();
      const double u = rng.uniform01();
      const double cur = theta[j];
      const double prop = cur + step;
      const double prior_sd = design.prior_sd[j];
      const double d_prior = (cur * cur - prop * prop) / (2.0 * prior_sd * prior_sd);
      if (j == 0) {
        for (std::size_t i = 0; i < n; ++i) eta_prop[i] = eta[i] + step;
      } else {
        const auto& col = design.centered_cols[j - 1];
        for (std::size_t i = 0; i < n; ++i) eta_prop[i] = eta[i] + step * col[i];
      }
      const double loglik_prop = bernoulli_loglik(design.outcome, eta_prop);
      const double log_ratio = (loglik_prop - loglik) + d_prior;
      // NaN compares false everywhere, so a NaN ratio is rejected
      const bool accept = std::log(u) < log_ratio;
      if (accept) {
        theta[j] = prop;
        eta.swap(eta_prop);
        loglik = loglik_prop;
        if (!warming) ++accept_count[j];
      }
      if (warming) {
        const double a =
            std::isnan(log_ratio) ? 0.0 : std::min(1.0, std::exp(std::min(log_ratio, 0.0)));
        log_scale[j] += adapt_rate * (a - config.target_accept);
        log_scale[j] = std::clamp(log_scale[j], -12.0, 8.0);
      }
    }
    if (t == config.n_warmup)
      for (std::size_t j = 0; j < n_par; ++j)
        info.scales_at_warmup_end.push_back(std::exp(log_scale[j]));
    if (!warming) {
      const std::size_t k = static_cast<std::size_t>(t - config.n_warmup - 1);
      // back to the original scale: slopes unchanged, intercept un-centered
      double intercept = theta[0];
      for (std::size_t j = 0; j < n_pred; ++j)
        intercept -= theta[j + 1] * design.centers[j];
      draws.at(chain_index, k, 0) = intercept;
      for (std::size_t j = 0; j < n_pred; ++j)
        draws.at(chain_index, k, j + 1) = theta[j + 1];
    }
  }
  for (std::size_t j = 0; j < n_par; ++j) {
    info.scales_final.push_back(std::exp(log_scale[j]));
    info.accept_rate.push_back(static_cast<double>(accept_count[j]) /
                               static_cast<double>(n_kept));
  }
}

}  // namespace detail

inline const char* intercept_name() { return "intercept"; }

// Fits the model and returns post-warmup draws for the intercept, the
// treatment coefficient (named after its column), and each covariate
// coefficient. Identical (data, config, seed) reproduces identical draws
// bit-for-bit; chains run on independent RNG streams (seed ^ chain index)
// and may execute in parallel.
inline LogisticFit fit_logistic(const Dataset& data, const SamplerConfig& config) {
  config.validate();
  data.validate_structure();
  if (!data.outcome_has_both_classes())
    throw ValidationError("outcome column '" + data.outcome_name +
                          "' has a single class; both 0 and 1 are required");

  detail::DesignMatrix design = detail::build_design(data, config);

  std::vector<std::string> names;
  names.push_back(intercept_name());
  for (const auto& n : design.predictor_names) names.push_back(n);

  const std::size_t n_chains = static_cast<std::size_t>(config.n_chains);
  const std::size_t n_kept = static_cast<std::size_t>(config.n_iter - config.n_warmup);
  LogisticFit fit{PosteriorDraws(names, n_chains, n_kept), {}};
  fit.chains.resize(n_chains);

  auto& scale_info = fit.draws.scale_info();
  scale_info.push_back({intercept_name(), 0.0, 0.0, config.intercept_prior_sd});
  for (std::size_t j = 0; j < design.predictor_names.size(); ++j)
    scale_info.push_back({design.predictor_names[j], design.centers[j], design.sds[j],
                          design.prior_sd[j + 1]});

  if (n_chains == 1) {
    detail::run_chain(design, config, 0, fit.draws, fit.chains[0]);
  } else {
    std::vector<std::thread> workers;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t c = 0; c < n_chains; ++c) {
      workers.emplace_back([&, c]() {
        try {
          detail::run_chain(design, config, c, fit.draws, fit.chains[c]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  fit.draws.validate();
  return fit;
}

}  // namespace bayesdec
