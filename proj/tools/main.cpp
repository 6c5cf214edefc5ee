// Command-line front end. Option values land in an AnalysisConfig: a config
// file (--config) is applied first, then any flags given on the command
// line override it.

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bayesdec/bayesdec.hpp"

namespace {

using bayesdec::AnalysisConfig;

// Flag values parked here until we know whether each was actually provided.
struct FlagValues {
  std::string config_path;
  std::string data, outcome, treatment, draws, param, out_dir;
  std::vector<std::string> drop;
  int n_chains = 0, n_iter = 0, n_warmup = 0;
  std::uint64_t seed = 0;
  double coef_prior_scale = 0, intercept_prior_sd = 0, target_accept = 0;
  double theta_md_or = 0, theta_md_log = 0, theta_mu_log = 0, unit_change = 0;
  std::vector<std::string> baseline_overrides;
  double grid_step = 0, grid_min = 0, grid_max = 0;
  std::vector<double> sweep_ors, curve_ors;
  std::string curve_mode;
  bool no_plots = false, allow_unconverged = false, confirm_coding = false;
};

void overlay_flags(const CLI::App& app, const FlagValues& v, AnalysisConfig& c) {
  const auto given = [&](const std::string& name) { return app.count(name) > 0; };
  if (given("--data")) c.data_path = v.data;
  if (given("--outcome")) c.outcome = v.outcome;
  if (given("--treatment")) c.treatment = v.treatment;
  if (given("--draws")) c.draws_path = v.draws;
  if (given("--param")) c.param = v.param;
  if (given("--out-dir")) c.out_dir = v.out_dir;
  if (given("--drop")) c.drop = v.drop;
  if (given("--n-chains")) c.sampler.n_chains = v.n_chains;
  if (given("--n-iter")) c.sampler.n_iter = v.n_iter;
  if (given("--n-warmup")) c.sampler.n_warmup = v.n_warmup;
  if (given("--seed")) c.sampler.seed = v.seed;
  if (given("--coef-prior-scale")) c.sampler.coef_prior_scale = v.coef_prior_scale;
  if (given("--intercept-prior-sd")) c.sampler.intercept_prior_sd = v.intercept_prior_sd;
  if (given("--target-accept")) c.sampler.target_accept = v.target_accept;
  if (given("--theta-md-or")) c.theta_md_or = v.theta_md_or;
  if (given("--theta-md-log")) c.theta_md_log = v.theta_md_log;
  if (given("--theta-mu-log")) c.theta_mu_log = v.theta_mu_log;
  if (given("--unit-change")) c.unit_change = v.unit_change;
  if (given("--baseline-override")) {
    c.baseline_overrides.clear();
    for (const auto& item : v.baseline_overrides)
      bayesdec::apply_config_entry(c, "baseline_override", item);
  }
  if (given("--grid-step")) c.grid_step = v.grid_step;
  if (given("--grid-min")) c.grid_min = v.grid_min;
  if (given("--grid-max")) c.grid_max = v.grid_max;
  if (given("--sweep-ors")) c.sweep_ors = v.sweep_ors;
  if (given("--curve-ors")) c.curve_ors = v.curve_ors;
  if (given("--curve-mode")) c.curve_mode = bayesdec::parse_curve_mode(v.curve_mode);
  if (given("--no-plots")) c.emit_plots = false;
  if (given("--allow-unconverged")) c.allow_unconverged = true;
  if (given("--confirm-coding")) c.confirm_coding = true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision analysis for binary-outcome policies: posterior "
               "effect summaries and expected-loss comparisons"};
  app.set_version_flag("--version", std::string(bayesdec::kVersion));
  app.fallthrough();
  app.require_subcommand(1);

  FlagValues v;
  app.add_option("--config", v.config_path, "config file (key = value lines)");
  app.add_option("--data", v.data, "dataset CSV (optionally .gz)");
  app.add_option("--outcome", v.outcome, "outcome column (0/1, 1 = undesirable event)");
  app.add_option("--treatment", v.treatment, "treatment column");
  app.add_option("--drop", v.drop, "columns to exclude from the covariates");
  app.add_option("--draws", v.draws, "draws CSV written by 'fit'");
  app.add_option("--param", v.param, "parameter to summarize (usually the treatment)");
  app.add_option("--out-dir", v.out_dir, "output directory (default .)");
  app.add_option("--n-chains", v.n_chains, "number of chains");
  app.add_option("--n-iter", v.n_iter, "iterations per chain, warmup included");
  app.add_option("--n-warmup", v.n_warmup, "warmup iterations discarded per chain");
  app.add_option("--seed", v.seed, "random seed");
  app.add_option("--coef-prior-scale", v.coef_prior_scale,
                 "prior sd of coefficients per sd of predictor");
  app.add_option("--intercept-prior-sd", v.intercept_prior_sd,
                 "prior sd of the centered intercept");
  app.add_option("--target-accept", v.target_accept, "proposal adaptation target");
  auto* md_or = app.add_option("--theta-md-or", v.theta_md_or,
                               "minimum desired effect as an odds ratio");
  auto* md_log = app.add_option("--theta-md-log", v.theta_md_log,
                                "minimum desired effect in log odds (< 0)");
  md_or->excludes(md_log);
  md_log->excludes(md_or);
  app.add_option("--theta-mu-log", v.theta_mu_log,
                 "minimum undesired effect in log odds (>= 0)");
  app.add_option("--unit-change", v.unit_change,
                 "treatment change of interest, multiplies the coefficient");
  app.add_option("--baseline-override", v.baseline_overrides,
                 "fix a covariate in the baseline profile, col=val");
  app.add_option("--grid-step", v.grid_step, "cost ratio grid step");
  app.add_option("--grid-min", v.grid_min, "smallest cost ratio");
  app.add_option("--grid-max", v.grid_max, "largest cost ratio");
  app.add_option("--sweep-ors", v.sweep_ors, "odds ratios for the sweep panel");
  app.add_option("--curve-ors", v.curve_ors, "odds ratios for the probability curve");
  app.add_option("--curve-mode", v.curve_mode,
                 "probability curve mode: threshold or conditional-mean");
  app.add_flag("--no-plots", v.no_plots, "skip SVG output");
  app.add_flag("--allow-unconverged", v.allow_unconverged,
               "proceed despite a failed mixing diagnostic");
  app.add_flag("--confirm-coding", v.confirm_coding,
               "assert that outcome/treatment coding has been checked");

  auto* fit = app.add_subcommand("fit", "fit the logistic model, write draws");
  auto* summarize =
      app.add_subcommand("summarize", "weighted effect summary from draws");
  auto* sweep = app.add_subcommand("sweep", "expected losses over cost ratios");
  auto* prob_curve =
      app.add_subcommand("prob-curve", "effect-size probabilities and revised risk");
  auto* check = app.add_subcommand("check", "validate dataset structure and coding");
  auto* selftest = app.add_subcommand("selftest", "run built-in numerical checks");

  CLI11_PARSE(app, argc, argv);

  try {
    AnalysisConfig config;
    if (app.count("--config") > 0) config = bayesdec::load_config(v.config_path);
    overlay_flags(app, v, config);

    if (*fit) return bayesdec::cmd_fit(config, std::cout);
    if (*summarize) return bayesdec::cmd_summarize(config, std::cout);
    if (*sweep) return bayesdec::cmd_sweep(config, std::cout);
    if (*prob_curve) return bayesdec::cmd_prob_curve(config, std::cout);
    if (*check) return bayesdec::cmd_check(config, std::cout);
    if (*selftest) return bayesdec::cmd_selftest(std::cout);
    std::cerr << "no subcommand given\n";
    return bayesdec::kExitValidation;
  } catch (const bayesdec::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bayesdec::kExitValidation;
  } catch (const bayesdec::NonconvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bayesdec::kExitNonconvergence;
  } catch (const bayesdec::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bayesdec::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
