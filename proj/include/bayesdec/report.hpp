#pragma once

// JSON report assembly. Every report carries the tool version and the
// effective configuration so a run can be reproduced from its outputs
// alone. nlohmann::json keeps object keys sorted, which together with the
// seeded pipeline makes reports byte-stable across runs.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bayesdec/config.hpp"
#include "bayesdec/diagnostics.hpp"
#include "bayesdec/draws.hpp"
#include "bayesdec/effects.hpp"
#include "bayesdec/loss.hpp"
#include "bayesdec/stats.hpp"
#include "bayesdec/version.hpp"

namespace bayesdec {

using nlohmann::json;

namespace detail {

inline json json_or_null(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

inline json report_shell(const AnalysisConfig& config) {
  json j;
  j["version"] = kVersion;
  j["config"] = config_to_map(config);
  return j;
}

}  // namespace detail

// Per-parameter posterior summary plus convergence diagnostics.
inline json fit_report(const PosteriorDraws& draws, const ConvergenceReport& conv,
                       const AnalysisConfig& config) {
  json j = detail::report_shell(config);
  j["n_chains"] = draws.n_chains();
  j["n_kept_per_chain"] = draws.n_kept();
  j["converged"] = conv.converged;
  json params = json::object();
  for (std::size_t p = 0; p < draws.parameter_names().size(); ++p) {
    const std::string& name = draws.parameter_names()[p];
    std::vector<double> pooled = draws.pooled(name);
    json entry;
    entry["mean"] = mean(pooled);
    entry["sd"] = sample_sd(pooled);
    entry["q025"] = quantile(pooled, 0.025);
    entry["q975"] = quantile(pooled, 0.975);
    entry["rhat"] = conv.rhat[p];
    entry["ess_bulk"] = conv.ess_bulk[p];
    params[name] = entry;
  }
  j["parameters"] = params;
  if (!conv.notes.empty()) j["notes"] = conv.notes;
  return j;
}

inline json effect_report(const EffectSummary& s, const EffectThresholds& thr,
                          const std::string& param, const AnalysisConfig& config) {
  json j = detail::report_shell(config);
  j["param"] = param;
  j["theta_md"] = thr.theta_md ? json(*thr.theta_md) : json("strict-neg");
  j["theta_mu"] = thr.theta_mu;
  j["unit_change"] = thr.unit_change;
  j["p"] = s.p;
  j["theta_int"] = detail::json_or_null(s.theta_int);
  j["q"] = s.q;
  j["theta_unint"] = detail::json_or_null(s.theta_unint);
  j["p_theta_int"] = s.p_theta_int;
  j["q_theta_unint"] = s.q_theta_unint;
  j["total_effect"] = s.total_effect();
  j["n_draws"] = s.n_draws_used;
  return j;
}

struct SweepResult {
  std::string label;
  EffectThresholds thresholds;
  EffectSummary summary;
  DecisionCurve curve;
  double critical = 0.0;
};

inline json sweep_report(double pi, const std::vector<SweepResult>& results,
                         const AnalysisConfig& config) {
  json j = detail::report_shell(config);
  j["pi"] = pi;
  j["baseline_likelihood"] = inv_logit(pi);
  json curves = json::array();
  for (const auto& r : results) {
    json entry;
    entry["label"] = r.label;
    entry["theta_md"] =
        r.thresholds.theta_md ? json(*r.thresholds.theta_md) : json("strict-neg");
    entry["theta_mu"] = r.thresholds.theta_mu;
    entry["p_theta_int"] = r.summary.p_theta_int;
    entry["q_theta_unint"] = r.summary.q_theta_unint;
    entry["crossover_ratio"] = detail::json_or_null(r.curve.crossover_ratio);
    entry["critical_ratio"] = r.critical;
    curves.push_back(entry);
  }
  j["curves"] = curves;
  return j;
}

inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace bayesdec
