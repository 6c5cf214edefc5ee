#pragma once

// Summaries that turn a treatment-effect posterior into the loss function's
// inputs. The posterior is partitioned at two thresholds: draws at or below
// theta_md are the intended (risk-reducing) effect, draws at or above
// theta_mu the unintended one, and anything between is treated as
// practically null. Each side is summarized by its probability mass times
// its conditional mean.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bayesdec/csv.hpp"
#include "bayesdec/dataset.hpp"
#include "bayesdec/draws.hpp"
#include "bayesdec/error.hpp"
#include "bayesdec/logit.hpp"
#include "bayesdec/stats.hpp"

namespace bayesdec {

// theta_md unset means the strict negative range (theta < 0): "any reduction
// at all" without committing to a numeric epsilon. When set it must be
// negative and the range is closed (theta <= theta_md). unit_change scales
// coefficient draws before thresholding, for continuous treatments.
struct EffectThresholds {
  std::optional<double> theta_md;  // nullopt = strict negative
  double theta_mu = 0.0;
  double unit_change = 1.0;

  static EffectThresholds strict_negative() { return {}; }
  static EffectThresholds at(double md, double mu, double unit = 1.0) {
    return {md, mu, unit};
  }

  bool is_strict_negative() const { return !theta_md.has_value(); }

  void validate() const {
    if (theta_md && !(*theta_md < 0.0))
      throw ValidationError("theta_md must be < 0 (or unset for the strict negative range)");
    if (!(theta_mu >= 0.0)) throw ValidationError("theta_mu must be >= 0");
    if (theta_md && !(*theta_md < theta_mu))
      throw ValidationError("theta_md must be below theta_mu");
    if (unit_change == 0.0 || !std::isfinite(unit_change))
      throw ValidationError("unit_change must be a nonzero finite value");
  }

  std::string describe_md() const {
    return theta_md ? csv::format_double(*theta_md) : std::string("strict-neg");
  }
};

// (p, theta_int, q, theta_unint) plus the probability-weighted products the
// loss function consumes. Conditional means are absent when their range
// holds no draws; the product is then 0 and the term drops out of the loss.
struct EffectSummary {
  double p = 0.0;
  std::optional<double> theta_int;
  double q = 0.0;
  std::optional<double> theta_unint;
  double p_theta_int = 0.0;
  double q_theta_unint = 0.0;
  std::size_t n_draws_used = 0;

  double total_effect() const { return p_theta_int + q_theta_unint; }
};

namespace detail {

inline EffectSummary summarize_scaled(const std::vector<double>& scaled,
                                      const EffectThresholds& thr) {
  EffectSummary s;
  s.n_draws_used = scaled.size();
  std::vector<double> lower, upper;
  for (double v : scaled) {
    const bool in_lower = thr.is_strict_negative() ? (v < 0.0) : (v <= *thr.theta_md);
    if (in_lower) lower.push_back(v);
    if (v >= thr.theta_mu) upper.push_back(v);
  }
  const double n = static_cast<double>(scaled.size());
  s.p = static_cast<double>(lower.size()) / n;
  s.q = static_cast<double>(upper.size()) / n;
  if (!lower.empty()) {
    s.theta_int = mean(lower);
    s.p_theta_int = s.p * (*s.theta_int);
  }
  if (!upper.empty()) {
    s.theta_unint = mean(upper);
    s.q_theta_unint = s.q * (*s.theta_unint);
  }
  return s;
}

}  // namespace detail

// p = P(theta <= theta_md | D) with theta_int its conditional mean, q and
// theta_unint likewise for the upper range; products as probability x mean.
// Draws are pooled across chains and multiplied by unit_change first.
inline EffectSummary effect_summary(const PosteriorDraws& draws,
                                    const std::string& param,
                                    const EffectThresholds& thr) {
  thr.validate();
  if (draws.n_total() == 0) throw ValidationError("empty posterior");
  std::vector<double> scaled = draws.pooled(param);
  if (thr.unit_change != 1.0)
    for (double& v : scaled) v *= thr.unit_change;
  return detail::summarize_scaled(scaled, thr);
}

inline EffectSummary effect_summary(const std::vector<double>& pooled_draws,
                                    const EffectThresholds& thr) {
  thr.validate();
  if (pooled_draws.empty()) throw ValidationError("empty posterior");
  std::vector<double> scaled = pooled_draws;
  if (thr.unit_change != 1.0)
    for (double& v : scaled) v *= thr.unit_change;
  return detail::summarize_scaled(scaled, thr);
}

// Under the strict-negative / zero thresholds the two weighted terms
// partition every draw, so their sum must equal the plain posterior mean.
// Returned as (sum of products, sample mean) for self-testing.
inline std::pair<double, double> mean_identity_check(const PosteriorDraws& draws,
                                                     const std::string& param) {
  const EffectSummary s =
      effect_summary(draws, param, EffectThresholds::strict_negative());
  const std::vector<double> pooled = draws.pooled(param);
  return {s.total_effect(), mean(pooled)};
}

inline std::pair<double, double> mean_identity_check(const std::vector<double>& pooled) {
  const EffectSummary s = effect_summary(pooled, EffectThresholds::strict_negative());
  return {s.total_effect(), mean(pooled)};
}

// Baseline profile: every covariate of the fitted model is evaluated at its
// empirical column mean unless overridden with a fixed value.
struct BaselineSpec {
  std::map<std::string, double> overrides;

  static constexpr const char* kEmpiricalMean = "empirical_mean";
};

// Baseline log odds of the event absent the policy:
//   pi = mean(b0 draws) + sum_j mean(gamma_j draws) * v_j
// where v_j is the override value if present and the empirical column mean
// otherwise. By linearity this equals averaging the linear predictor over
// the rows, so the mean profile stands in for the "average case". The
// treatment coefficient is excluded; it enters through the loss function.
inline double baseline_logodds(const PosteriorDraws& draws, const Dataset& data,
                               const BaselineSpec& spec = {}) {
  if (!draws.has_param("intercept"))
    throw ValidationError("baseline_logodds needs draws with an 'intercept' parameter");
  std::vector<std::string> unmatched;
  for (const auto& [name, value] : spec.overrides) {
    (void)value;
    bool in_model = false;
    for (const auto& pname : draws.parameter_names())
      if (pname == name && name != "intercept" && name != data.treatment_name)
        in_model = true;
    if (!in_model) unmatched.push_back(name);
  }
  if (!unmatched.empty()) {
    std::ostringstream msg;
    msg << "baseline override names not among the model covariates:";
    for (const auto& n : unmatched) msg << " " << n;
    throw ValidationError(msg.str());
  }

  double pi = mean(draws.pooled("intercept"));
  for (const auto& pname : draws.parameter_names()) {
    if (pname == "intercept" || pname == data.treatment_name) continue;
    if (!data.has_column(pname))
      throw ValidationError("fitted parameter '" + pname +
                            "' has no matching dataset column");
    const auto it = spec.overrides.find(pname);
    const double v = (it != spec.overrides.end()) ? it->second : mean(data.column(pname));
    pi += mean(draws.pooled(pname)) * v;
  }
  return pi;
}

// Same construction without a dataset: legal only when every covariate is
// pinned by an override, since there are no columns to average.
inline double baseline_logodds(const PosteriorDraws& draws,
                               const std::string& treatment,
                               const BaselineSpec& spec = {}) {
  if (!draws.has_param("intercept"))
    throw ValidationError("baseline_logodds needs draws with an 'intercept' parameter");
  for (const auto& [name, value] : spec.overrides) {
    (void)value;
    if (!draws.has_param(name) || name == "intercept" || name == treatment)
      throw ValidationError("baseline override names not among the model covariates: " +
                            name);
  }
  double pi = mean(draws.pooled("intercept"));
  for (const auto& pname : draws.parameter_names()) {
    if (pname == "intercept" || pname == treatment) continue;
    const auto it = spec.overrides.find(pname);
    if (it == spec.overrides.end())
      throw ValidationError("no dataset given, so covariate '" + pname +
                            "' needs a baseline override value");
    pi += mean(draws.pooled(pname)) * it->second;
  }
  return pi;
}

enum class CurveMode {
  kThreshold,        // revised likelihood = inv_logit(pi + t)
  kConditionalMean,  // revised likelihood = inv_logit(pi + E[theta | theta <= t])
};

struct ProbCurvePoint {
  std::optional<double> threshold;  // nullopt = strict negative
  double revised_likelihood = 0.0;
  double probability = 0.0;  // P(theta <= threshold | D)
};

// For each threshold t: the probability that the effect is at least that
// desirable, paired with the event likelihood revised by that effect size.
// In conditional-mean mode an empty range falls back to the threshold value
// itself, which keeps the curve monotone and total. Points are returned
// sorted by threshold, the strict-negative sentinel last (it is the widest
// range).
inline std::vector<ProbCurvePoint> prob_effect_curve(
    const PosteriorDraws& draws, const std::string& param, double pi,
    std::vector<std::optional<double>> grid,
    CurveMode mode = CurveMode::kConditionalMean, double unit_change = 1.0) {
  if (grid.empty()) throw ValidationError("prob_effect_curve: empty threshold grid");
  if (!std::isfinite(pi)) throw ValidationError("prob_effect_curve: pi must be finite");
  for (const auto& t : grid)
    if (t && !(*t < 0.0))
      throw ValidationError("prob_effect_curve: grid thresholds must be < 0");

  std::vector<double> scaled = draws.pooled(param);
  if (unit_change == 0.0 || !std::isfinite(unit_change))
    throw ValidationError("unit_change must be a nonzero finite value");
  if (unit_change != 1.0)
    for (double& v : scaled) v *= unit_change;

  std::sort(grid.begin(), grid.end(),
            [](const std::optional<double>& a, const std::optional<double>& b) {
              if (a && b) return *a < *b;
              return a.has_value() && !b.has_value();  // finite before strict-neg
            });

  const double n = static_cast<double>(scaled.size());
  std::vector<ProbCurvePoint> curve;
  for (const auto& t : grid) {
    std::vector<double> below;
    for (double v : scaled) {
      const bool in = t ? (v <= *t) : (v < 0.0);
      if (in) below.push_back(v);
    }
    ProbCurvePoint pt;
    pt.threshold = t;
    pt.probability = static_cast<double>(below.size()) / n;
    double shift;
    if (mode == CurveMode::kThreshold) {
      shift = t ? *t : 0.0;
    } else {
      if (!below.empty())
        shift = mean(below);
      else
        shift = t ? *t : 0.0;
    }
    pt.revised_likelihood = inv_logit(pi + shift);
    curve.push_back(pt);
  }
  return curve;
}

// Effect thresholds are often stated as odds ratios; the loss works in log
// odds.
inline double or_to_logodds(double odds_ratio) {
  if (!(odds_ratio > 0.0)) throw ValidationError("odds ratio must be > 0");
  return std::log(odds_ratio);
}

}  // namespace bayesdec
