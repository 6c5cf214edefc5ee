#pragma once

// Subcommand implementations behind the CLI. Each takes the effective
// AnalysisConfig, writes its artifacts under out_dir, prints a short
// human-readable account to `out`, and returns the process exit code.
// Validation and I/O problems are thrown and mapped to exit codes by the
// caller.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bayesdec/config.hpp"
#include "bayesdec/diagnostics.hpp"
#include "bayesdec/draws.hpp"
#include "bayesdec/effects.hpp"
#include "bayesdec/error.hpp"
#include "bayesdec/ingest.hpp"
#include "bayesdec/loss.hpp"
#include "bayesdec/plots.hpp"
#include "bayesdec/report.hpp"
#include "bayesdec/sampler.hpp"
#include "bayesdec/selftest.hpp"

namespace bayesdec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonconvergence = 3;
inline constexpr int kExitIo = 4;

namespace detail {

inline std::string out_dir_of(const AnalysisConfig& config) {
  const std::string dir = config.out_dir.value_or(".");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "'");
  return dir;
}

inline std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

inline Dataset load_configured_dataset(const AnalysisConfig& config) {
  if (!config.data_path) throw ValidationError("--data is required");
  if (!config.outcome) throw ValidationError("--outcome is required");
  if (!config.treatment) throw ValidationError("--treatment is required");
  return load_dataset(*config.data_path, *config.outcome, *config.treatment,
                      config.drop);
}

inline PosteriorDraws load_configured_draws(const AnalysisConfig& config) {
  if (!config.draws_path)
    throw ValidationError("--draws is required (a draws CSV written by 'fit')");
  return import_draws(*config.draws_path);
}

inline std::string resolve_param(const AnalysisConfig& config,
                                 const PosteriorDraws& draws) {
  if (!config.param) {
    std::ostringstream msg;
    msg << "--param is required; draws contain:";
    for (const auto& n : draws.parameter_names()) msg << " " << n;
    throw ValidationError(msg.str());
  }
  if (!draws.has_param(*config.param))
    throw ValidationError("parameter '" + *config.param + "' not found in draws");
  return *config.param;
}

// Recomputes the mixing diagnostic when the draws allow it. Nonconverged
// draws stop the run unless explicitly waved through; single-chain draws
// cannot be checked and proceed with a warning.
inline void convergence_gate(const PosteriorDraws& draws,
                             const AnalysisConfig& config, std::ostream& out) {
  if (draws.n_chains() < 2) {
    out << "warning: single chain, mixing diagnostic unavailable\n";
    return;
  }
  const ConvergenceReport conv = split_rhat(draws);
  if (conv.converged || config.allow_unconverged) {
    if (!conv.converged)
      out << "warning: proceeding on unconverged draws (--allow-unconverged)\n";
    return;
  }
  std::ostringstream msg;
  msg << "draws fail the mixing diagnostic (threshold " << kRhatThreshold << "):";
  for (std::size_t p = 0; p < conv.parameter_names.size(); ++p)
    if (!conv.parameter_ok(p))
      msg << " " << conv.parameter_names[p] << " (R-hat "
          << (std::isnan(conv.rhat[p]) ? std::string("undefined")
                                       : fixed4(conv.rhat[p]))
          << ")";
  msg << "; rerun the fit longer or pass --allow-unconverged";
  throw NonconvergenceError(msg.str());
}

inline double resolve_pi(const AnalysisConfig& config, const PosteriorDraws& draws,
                         const std::string& param) {
  BaselineSpec spec;
  spec.overrides = config.baseline_overrides;
  if (config.data_path) {
    const Dataset data = load_configured_dataset(config);
    return baseline_logodds(draws, data, spec);
  }
  return baseline_logodds(draws, param, spec);
}

inline std::string decision_curve_csv(const DecisionCurve& curve) {
  std::ostringstream out;
  out << "ratio,loss_implement,loss_not_implement\n";
  for (const auto& pt : curve.points)
    out << csv::format_double(pt.ratio) << "," << csv::format_double(pt.loss_implement)
        << "," << csv::format_double(pt.loss_not) << "\n";
  out << "# crossover = "
      << (curve.crossover_ratio ? csv::format_double(*curve.crossover_ratio)
                                : std::string("none"))
      << "\n";
  return out.str();
}

}  // namespace detail

// Structural and coding validation of a dataset, without fitting anything.
inline int cmd_check(const AnalysisConfig& config, std::ostream& out) {
  const Dataset data = detail::load_configured_dataset(config);
  const CodingReport report = validate_coding(data);
  out << "rows: " << data.n_rows() << "\n";
  out << "outcome '" << data.outcome_name << "': binary, both classes present\n";
  out << "treatment '" << data.treatment_name << "': "
      << (Dataset::is_binary(data.treatment) ? "binary 0/1" : "continuous") << "\n";
  out << "covariates:";
  if (data.covariate_names.empty()) out << " (none)";
  for (const auto& n : data.covariate_names) out << " " << n;
  out << "\n";
  out << report.treatment_direction_note << "\n";
  out << "If a column is coded the other way around, recode the data (for a "
         "binary column, 1 - x) before fitting.\n";
  (void)report.outcome_ok;
  return kExitOk;
}

// Fits the logistic model and writes the draws plus a convergence report.
// Returns the nonconvergence exit code when any parameter fails the mixing
// diagnostic; the artifacts are written either way.
inline int cmd_fit(const AnalysisConfig& config, std::ostream& out) {
  if (!config.confirm_coding)
    throw ValidationError(
        "fit requires --confirm-coding; run 'check' first and confirm that "
        "outcome 1 is the undesirable event and higher treatment reduces it");
  if (config.sampler.n_chains < 2)
    throw ValidationError("fit needs >= 2 chains for the mixing diagnostic");
  const Dataset data = detail::load_configured_dataset(config);
  validate_coding(data);

  const LogisticFit fit = fit_logistic(data, config.sampler);
  const ConvergenceReport conv = split_rhat(fit.draws);

  const std::string dir = detail::out_dir_of(config);
  const std::string draws_path = detail::join_path(dir, "draws.csv");
  export_draws(fit.draws, draws_path);
  const std::string report_path = detail::join_path(dir, "fit_report.json");
  csv::write_file(report_path, dump_report(fit_report(fit.draws, conv, config)));

  out << "parameter            mean       2.5%      97.5%     R-hat\n";
  for (std::size_t p = 0; p < fit.draws.parameter_names().size(); ++p) {
    const std::string& name = fit.draws.parameter_names()[p];
    const std::vector<double> pooled = fit.draws.pooled(name);
    char line[160];
    std::snprintf(line, sizeof(line), "%-16s %9.4f  %9.4f  %9.4f  %8s\n",
                  name.c_str(), mean(pooled), quantile(pooled, 0.025),
                  quantile(pooled, 0.975),
                  std::isnan(conv.rhat[p]) ? "undef"
                                           : detail::fixed4(conv.rhat[p]).c_str());
    out << line;
  }
  for (const auto& note : conv.notes) out << "note: " << note << "\n";
  out << "draws: " << draws_path << "\n";
  out << "report: " << report_path << "\n";
  if (!conv.converged) {
    out << "chains did not converge; treat these draws with suspicion\n";
    return kExitNonconvergence;
  }
  return kExitOk;
}

// Effect summary under the configured thresholds, as JSON plus the density
// figure with the intended / null / unintended regions shaded.
inline int cmd_summarize(const AnalysisConfig& config, std::ostream& out) {
  const PosteriorDraws draws = detail::load_configured_draws(config);
  const std::string param = detail::resolve_param(config, draws);
  detail::convergence_gate(draws, config, out);

  const EffectThresholds thr = config.thresholds();
  const EffectSummary summary = effect_summary(draws, param, thr);

  const std::string dir = detail::out_dir_of(config);
  const std::string json_path = detail::join_path(dir, "effect_summary.json");
  csv::write_file(json_path, dump_report(effect_report(summary, thr, param, config)));

  if (config.emit_plots) {
    std::vector<double> scaled = draws.pooled(param);
    if (thr.unit_change != 1.0)
      for (double& v : scaled) v *= thr.unit_change;
    const std::string svg_path = detail::join_path(dir, "effect_density.svg");
    csv::write_file(svg_path, density_figure(scaled, thr, summary, param));
    out << "plot: " << svg_path << "\n";
  }

  out << "param: " << param << "  thresholds: [" << thr.describe_md() << ", "
      << detail::short_num(thr.theta_mu) << "]\n";
  out << "p = " << detail::fixed4(summary.p) << "  theta_int = "
      << (summary.theta_int ? detail::fixed4(*summary.theta_int) : "n/a")
      << "  p*theta_int = " << detail::fixed4(summary.p_theta_int) << "\n";
  out << "q = " << detail::fixed4(summary.q) << "  theta_unint = "
      << (summary.theta_unint ? detail::fixed4(*summary.theta_unint) : "n/a")
      << "  q*theta_unint = " << detail::fixed4(summary.q_theta_unint) << "\n";
  out << "total weighted effect = " << detail::fixed4(summary.total_effect()) << "\n";
  out << "report: " << json_path << "\n";
  return kExitOk;
}

// Expected-loss sweeps over the cost ratio, one curve per threshold choice.
inline int cmd_sweep(const AnalysisConfig& config, std::ostream& out) {
  const PosteriorDraws draws = detail::load_configured_draws(config);
  const std::string param = detail::resolve_param(config, draws);
  detail::convergence_gate(draws, config, out);
  const double pi = detail::resolve_pi(config, draws, param);

  // Explicit thresholds give a single curve; otherwise sweep the default
  // odds-ratio panel.
  std::vector<std::pair<std::string, EffectThresholds>> cases;
  if (config.theta_md_or || config.theta_md_log) {
    const EffectThresholds thr = config.thresholds();
    const std::string label =
        config.theta_md_or ? "or_" + detail::short_num(*config.theta_md_or)
                           : "md_" + detail::short_num(*config.theta_md_log);
    cases.emplace_back(label, thr);
  } else {
    if (config.sweep_ors.empty())
      throw ValidationError("sweep needs sweep_ors or an explicit threshold");
    for (double odds : config.sweep_ors) {
      EffectThresholds thr;
      thr.theta_md = or_to_logodds(odds);
      thr.theta_mu = config.theta_mu_log;
      thr.unit_change = config.unit_change;
      thr.validate();
      cases.emplace_back("or_" + detail::short_num(odds), thr);
    }
  }

  const std::string dir = detail::out_dir_of(config);
  std::vector<SweepResult> results;
  std::vector<SweepPanel> panels;
  for (const auto& [label, thr] : cases) {
    SweepResult r;
    r.label = label;
    r.thresholds = thr;
    r.summary = effect_summary(draws, param, thr);
    r.curve = cost_ratio_sweep(pi, r.summary, config.grid_step, config.grid_min,
                               config.grid_max);
    r.critical = critical_ratio(pi, r.summary);
    const std::string csv_path = detail::join_path(dir, "sweep_" + label + ".csv");
    csv::write_file(csv_path, detail::decision_curve_csv(r.curve));
    out << label << ": crossover = "
        << (r.curve.crossover_ratio ? detail::short_num(*r.curve.crossover_ratio)
                                    : std::string("none"))
        << "  (closed form " << detail::fixed4(r.critical) << ")  -> " << csv_path
        << "\n";
    panels.push_back({label, r.curve});
    results.push_back(std::move(r));
  }

  const std::string report_path = detail::join_path(dir, "sweep_report.json");
  csv::write_file(report_path, dump_report(sweep_report(pi, results, config)));
  if (config.emit_plots) {
    const std::string svg_path = detail::join_path(dir, "sweep_losses.svg");
    csv::write_file(svg_path, decision_figure(panels));
    out << "plot: " << svg_path << "\n";
  }
  out << "baseline likelihood = " << detail::fixed4(inv_logit(pi)) << "  (pi = "
      << detail::fixed4(pi) << ")\n";
  out << "report: " << report_path << "\n";
  return kExitOk;
}

// Probability of reaching each candidate effect size, with the event
// likelihood it would imply.
inline int cmd_prob_curve(const AnalysisConfig& config, std::ostream& out) {
  const PosteriorDraws draws = detail::load_configured_draws(config);
  const std::string param = detail::resolve_param(config, draws);
  detail::convergence_gate(draws, config, out);
  const double pi = detail::resolve_pi(config, draws, param);

  std::vector<std::optional<double>> grid;
  grid.push_back(std::nullopt);  // the whole risk-reducing range
  for (double odds : config.curve_or_grid()) grid.push_back(or_to_logodds(odds));

  const std::vector<ProbCurvePoint> curve = prob_effect_curve(
      draws, param, pi, grid, config.curve_mode, config.unit_change);

  std::ostringstream body;
  body << "threshold,revised_likelihood,probability\n";
  for (const auto& pt : curve)
    body << (pt.threshold ? csv::format_double(*pt.threshold)
                          : std::string("strict-neg"))
         << "," << csv::format_double(pt.revised_likelihood) << ","
         << csv::format_double(pt.probability) << "\n";

  const std::string dir = detail::out_dir_of(config);
  const std::string csv_path = detail::join_path(dir, "prob_curve.csv");
  csv::write_file(csv_path, body.str());
  if (config.emit_plots) {
    const std::string svg_path = detail::join_path(dir, "prob_curve.svg");
    csv::write_file(svg_path, prob_curve_figure(curve, inv_logit(pi)));
    out << "plot: " << svg_path << "\n";
  }

  out << "mode: " << curve_mode_name(config.curve_mode)
      << "  baseline likelihood = " << detail::fixed4(inv_logit(pi)) << "\n";
  for (const auto& pt : curve) {
    if (!pt.threshold) {
      out << "any risk reduction: probability " << detail::fixed4(pt.probability)
          << ", revised likelihood " << detail::fixed4(pt.revised_likelihood)
          << "\n";
      break;
    }
  }
  out << "curve: " << csv_path << "\n";
  return kExitOk;
}

inline int cmd_selftest(std::ostream& out) { return run_selftest(out); }

}  // namespace bayesdec
