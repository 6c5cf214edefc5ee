// End-to-end checks for the analysis pipeline, one line of output per check.
// Each check exercises a documented behavior against an independent oracle
// (closed forms, quadrature, or regeneration); the binary exits nonzero if
// any of them fails.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bayesdec/diagnostics.hpp"
#include "bayesdec/effects.hpp"
#include "bayesdec/logit.hpp"
#include "bayesdec/loss.hpp"
#include "bayesdec/sampler.hpp"
#include "bayesdec/stats.hpp"
#include "oracles.hpp"

using namespace bayesdec;

namespace {

// Collects the first few failure details of a check; empty means pass.
struct Verdict {
  std::string name;
  std::vector<std::string> problems;

  void require(bool ok, const std::string& detail) {
    if (!ok && problems.size() < 4) problems.push_back(detail);
  }
  bool ok() const { return problems.empty(); }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// --- 1: weighted effect summary vs truncated-normal closed forms -------------

Verdict check_effect_summary_closed_form() {
  Verdict v{"effect-summary-closed-form", {}};
  const double m = -0.5, s = 0.5;
  const std::size_t n = 10000;
  oracles::TestRng rng(20260814);
  std::vector<double> draws(n);
  for (double& x : draws) x = rng.normal(m, s);
  const double root_n = std::sqrt(static_cast<double>(n));

  struct Case {
    EffectThresholds thr;
    double lower_t;  // threshold of the intended range
    double upper_t;
    double band_lo_center, band_lo_width;
    double band_up_center, band_up_width;
  };
  const Case cases[] = {
      {EffectThresholds::strict_negative(), 0.0, 0.0, -0.55, 0.02, 0.04, 0.01},
      {EffectThresholds::at(-0.5, 0.5), -0.5, 0.5, -0.46, 0.02, 0.02, 0.01},
  };

  for (const Case& c : cases) {
    const EffectSummary est = effect_summary(draws, c.thr);

    const double lo_true = oracles::weighted_mean_below(m, s, c.lower_t);
    const double lo_se = oracles::weighted_sd_below(m, s, c.lower_t) / root_n;
    v.require(std::abs(est.p_theta_int - lo_true) <= 3.0 * lo_se,
              "intended product " + num(est.p_theta_int) + " vs oracle " +
                  num(lo_true) + " (3 SE = " + num(3.0 * lo_se) + ")");
    v.require(std::abs(est.p_theta_int - c.band_lo_center) <= c.band_lo_width,
              "intended product " + num(est.p_theta_int) + " outside " +
                  num(c.band_lo_center) + " +/- " + num(c.band_lo_width));

    const double up_true = oracles::weighted_mean_above(m, s, c.upper_t);
    const double up_se = oracles::weighted_sd_above(m, s, c.upper_t) / root_n;
    v.require(std::abs(est.q_theta_unint - up_true) <= 3.0 * up_se,
              "unintended product " + num(est.q_theta_unint) + " vs oracle " +
                  num(up_true) + " (3 SE = " + num(3.0 * up_se) + ")");
    v.require(std::abs(est.q_theta_unint - c.band_up_center) <= c.band_up_width,
              "unintended product " + num(est.q_theta_unint) + " outside " +
                  num(c.band_up_center) + " +/- " + num(c.band_up_width));

    const double p_true = oracles::mass_below(m, s, c.lower_t);
    v.require(std::abs(est.p - p_true) <=
                  3.0 * std::sqrt(p_true * (1.0 - p_true)) / root_n,
              "intended mass " + num(est.p) + " vs oracle " + num(p_true));
  }
  return v;
}

// --- 2: the two weighted terms must reassemble the sample mean ---------------

Verdict check_mean_identity() {
  Verdict v{"weighted-terms-mean-identity", {}};
  oracles::TestRng rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 100 + static_cast<std::size_t>(rng.uniform(0.0, 9900.0));
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const double shift = sign * rng.uniform(0.05, 2.0);
    const double scale = rng.uniform(0.1, 3.0);
    std::vector<double> draws(n);
    for (double& x : draws) x = rng.normal(shift, scale);
    const auto [total, sample_mean] = mean_identity_check(draws);
    const double tol = 1e-12 * std::max(1.0, std::abs(sample_mean));
    v.require(std::abs(total - sample_mean) <= tol,
              "rep " + std::to_string(rep) + ": |" + num(total) + " - " +
                  num(sample_mean) + "| > " + num(tol));
  }
  return v;
}

// --- 3: sweep crossover vs the closed-form critical ratio --------------------

EffectSummary split_total(double total, double q_part) {
  EffectSummary s;
  s.q_theta_unint = q_part;
  s.p_theta_int = total - q_part;
  return s;
}

Verdict check_crossover_closed_form() {
  Verdict v{"crossover-matches-closed-form", {}};
  oracles::TestRng rng(8);
  for (int rep = 0; rep < 1000; ++rep) {
    const double pi = rng.uniform(-3.0, 3.0);
    const double total = rep < 10 ? 0.0 : rng.uniform(-3.0, 0.0);
    const double q_part = rng.uniform(0.0, 0.3);
    const EffectSummary summary = split_total(total, q_part);

    const double crit = critical_ratio(pi, summary);
    const DecisionCurve curve = cost_ratio_sweep(pi, summary);
    const std::string tag = "rep " + std::to_string(rep) + " (pi " + num(pi) +
                            ", total " + num(total) + ")";
    if (curve.crossover_ratio) {
      v.require(std::abs(*curve.crossover_ratio - crit) <= 0.01 + 1e-9,
                tag + ": crossover " + num(*curve.crossover_ratio) +
                    " vs closed form " + num(crit));
      v.require(*curve.crossover_ratio < crit + 1e-9,
                tag + ": crossover exceeds the closed form");
    } else {
      v.require(crit <= 0.01 + 1e-9,
                tag + ": no crossover though closed form gives " + num(crit));
    }
  }
  return v;
}

// --- 4: odds-ratio shifts of a 26% baseline ----------------------------------

Verdict check_odds_ratio_table() {
  Verdict v{"odds-ratio-risk-table", {}};
  const double pi = logit(0.26);
  const double ors[] = {0.5, 0.25, 0.1, 0.05};
  const double expected[] = {0.149, 0.081, 0.034, 0.017};
  for (int i = 0; i < 4; ++i) {
    const double got = inv_logit(pi + or_to_logodds(ors[i]));
    v.require(std::abs(got - expected[i]) <= 5e-3,
              "odds ratio " + num(ors[i]) + ": " + num(got) + " vs " +
                  num(expected[i]));
  }
  return v;
}

// --- 5: sampler accuracy (quadrature match, recovery, mixing) ----------------

Dataset recovery_data(std::size_t n, double alpha, double beta, double gamma,
                      std::uint64_t seed) {
  oracles::TestRng rng(seed);
  Dataset data;
  data.outcome_name = "y";
  data.treatment_name = "d";
  data.covariate_names = {"x1"};
  data.covariates.resize(1);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = rng.bernoulli(0.5) ? 1.0 : 0.0;
    const double x = rng.normal(0.0, 1.0);
    const double p = 1.0 / (1.0 + std::exp(-(alpha + beta * d + gamma * x)));
    data.treatment.push_back(d);
    data.covariates[0].push_back(x);
    data.outcome.push_back(rng.bernoulli(p) ? 1.0 : 0.0);
  }
  return data;
}

Verdict check_sampler_accuracy() {
  Verdict v{"sampler-posterior-accuracy", {}};

  // (a) intercept-only fit against 1-D quadrature
  {
    const int k = 30, n = 100;
    Dataset data;
    data.outcome_name = "y";
    data.treatment_name = "";
    for (int i = 0; i < n; ++i) data.outcome.push_back(i < k ? 1.0 : 0.0);

    SamplerConfig config;
    config.n_chains = 4;
    config.n_iter = 10000;
    config.n_warmup = 1000;
    config.seed = 404;
    const LogisticFit fit = fit_logistic(data, config);
    const std::vector<double> pooled = fit.draws.pooled("intercept");
    const oracles::PosteriorMoments truth =
        oracles::quadrature_logistic_intercept(k, n, config.intercept_prior_sd);

    v.require(std::abs(mean(pooled) - truth.mean) <= 0.02 * std::abs(truth.mean),
              "quadrature mean " + num(truth.mean) + " vs sampled " +
                  num(mean(pooled)));
    v.require(std::abs(sample_sd(pooled) - truth.sd) <= 0.02 * truth.sd,
              "quadrature sd " + num(truth.sd) + " vs sampled " +
                  num(sample_sd(pooled)));

    const ConvergenceReport conv = split_rhat(fit.draws);
    v.require(conv.converged, "intercept-only fixture failed the mixing check");
  }

  // (b) + (c) generate-and-recover with the mixing diagnostic on every fit
  {
    const double alpha = -0.5, beta = -1.0, gamma = 0.5;
    SamplerConfig config;
    config.n_chains = 4;
    config.n_iter = 4500;
    config.n_warmup = 1000;

    int recovered = 0;
    int mixed = 0;
    for (int rep = 0; rep < 50; ++rep) {
      const Dataset data =
          recovery_data(500, alpha, beta, gamma, 1000 + static_cast<std::uint64_t>(rep));
      config.seed = 9000 + static_cast<std::uint64_t>(rep);
      const LogisticFit fit = fit_logistic(data, config);

      const double truth[] = {alpha, beta, gamma};
      const char* names[] = {"intercept", "d", "x1"};
      bool all_in = true;
      for (int j = 0; j < 3; ++j) {
        const std::vector<double> pooled = fit.draws.pooled(names[j]);
        if (std::abs(mean(pooled) - truth[j]) > 3.0 * sample_sd(pooled))
          all_in = false;
      }
      if (all_in) ++recovered;
      if (split_rhat(fit.draws).converged) ++mixed;
    }
    v.require(recovered >= 47, "recovered true coefficients in only " +
                                   std::to_string(recovered) + " of 50 runs");
    v.require(mixed == 50, "mixing diagnostic failed on " +
                               std::to_string(50 - mixed) + " of 50 runs");
  }
  return v;
}

// --- 6: the loss difference is monotone with a single sign change ------------

Verdict check_loss_monotonicity() {
  Verdict v{"loss-difference-monotone", {}};
  oracles::TestRng rng(9);
  for (int rep = 0; rep < 1000; ++rep) {
    const double pi = rng.uniform(-3.0, 3.0);
    const double total = -rng.uniform(1e-6, 3.0);
    const double q_part = rng.uniform(0.0, 0.3);
    const DecisionCurve curve = cost_ratio_sweep(pi, split_total(total, q_part));
    const std::string tag = "rep " + std::to_string(rep);

    int sign_changes = 0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      const double diff = curve.points[i].loss_implement - curve.points[i].loss_not;
      if (i > 0) {
        const double prev =
            curve.points[i - 1].loss_implement - curve.points[i - 1].loss_not;
        v.require(diff > prev, tag + ": loss difference not strictly increasing at ratio " +
                                   num(curve.points[i].ratio));
        if ((diff < 0.0) != (prev < 0.0)) ++sign_changes;
      }
    }
    v.require(sign_changes <= 1,
              tag + ": " + std::to_string(sign_changes) + " sign changes");
  }
  return v;
}

// --- 7: tighter effect thresholds move the crossover down --------------------

Verdict check_crossover_ordering() {
  Verdict v{"crossover-ordering", {}};

  // deterministic trial-like dataset: 26% event rate untreated, strong
  // negative treatment effect, small treated arm
  Dataset data;
  data.outcome_name = "y";
  data.treatment_name = "d";
  const int n_treated = 18, n_total = 120;
  for (int i = 0; i < n_total; ++i) {
    const bool treated = i < n_treated;
    data.treatment.push_back(treated ? 1.0 : 0.0);
    const int j = treated ? i : i - n_treated;  // index within the arm
    const bool event = treated ? (j < 1) : (j < 27);
    data.outcome.push_back(event ? 1.0 : 0.0);
  }

  SamplerConfig config;
  config.n_chains = 4;
  config.n_iter = 5000;
  config.n_warmup = 1000;
  config.seed = 2211;
  const LogisticFit fit = fit_logistic(data, config);
  v.require(split_rhat(fit.draws).converged, "fixture fit failed the mixing check");

  const double pi = baseline_logodds(fit.draws, data);
  v.require(std::abs(inv_logit(pi) - 0.26) < 0.08,
            "baseline likelihood " + num(inv_logit(pi)) + " far from 26%");

  std::vector<double> crossovers;
  for (double odds : {0.5, 0.25, 0.1, 0.05}) {
    EffectThresholds thr;
    thr.theta_md = or_to_logodds(odds);
    const EffectSummary summary = effect_summary(fit.draws, "d", thr);
    const DecisionCurve curve = cost_ratio_sweep(pi, summary);
    if (!curve.crossover_ratio) {
      v.require(false, "no crossover at odds ratio " + num(odds));
      continue;
    }
    crossovers.push_back(*curve.crossover_ratio);
  }
  for (std::size_t i = 1; i < crossovers.size(); ++i)
    v.require(crossovers[i] < crossovers[i - 1] - 1e-12,
              "crossover " + num(crossovers[i]) + " at a tighter threshold is not "
              "below " + num(crossovers[i - 1]));
  return v;
}

// --- 8: byte-identical artifacts from identical seeded runs ------------------

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

bool run_pipeline(const std::filesystem::path& dir, const std::string& exe,
                  std::string& error) {
  std::filesystem::create_directories(dir);
  std::string data = "y,d,x1\n";
  for (int i = 0; i < 90; ++i) {
    const int d = i % 2;
    const double x = static_cast<double>((i * 5) % 9) / 4.0 - 1.0;
    const int y = (d == 0) ? (i % 5 < 2 ? 1 : 0) : (i % 10 == 1 ? 1 : 0);
    char row[64];
    std::snprintf(row, sizeof(row), "%d,%d,%.2f\n", y, d, x);
    data += row;
  }
  std::ofstream(dir / "data.csv", std::ios::binary) << data;

  const std::string steps[] = {
      "fit --data data.csv --outcome y --treatment d --confirm-coding "
      "--n-chains 2 --n-iter 3000 --n-warmup 900 --seed 31 --out-dir out",
      "summarize --draws out/draws.csv --param d --out-dir out --allow-unconverged",
      "sweep --draws out/draws.csv --param d --data data.csv --outcome y "
      "--treatment d --out-dir out --allow-unconverged",
  };
  for (int i = 0; i < 3; ++i) {
    const std::string cmd = "cd '" + dir.string() + "' && '" + exe + "' " +
                            steps[i] + " > step" + std::to_string(i) +
                            ".log 2>&1";
    const int rc = std::system(cmd.c_str());
    const int code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
    if (code != 0 && !(i == 0 && code == 3)) {
      error = "step " + std::to_string(i) + " exited with " + std::to_string(code);
      return false;
    }
  }
  return true;
}

Verdict check_cli_determinism() {
  Verdict v{"cli-determinism", {}};
  const char* exe = std::getenv("BAYESDEC_CLI");
  if (!exe) {
    v.require(false, "BAYESDEC_CLI not set (run via ctest)");
    return v;
  }

  const std::filesystem::path base = "acceptance_scratch";
  std::filesystem::remove_all(base);
  std::string error;
  if (!run_pipeline(base / "a", exe, error)) {
    v.require(false, "first run: " + error);
    return v;
  }
  if (!run_pipeline(base / "b", exe, error)) {
    v.require(false, "second run: " + error);
    return v;
  }

  std::vector<std::string> names;
  for (const auto& entry :
       std::filesystem::directory_iterator(base / "a" / "out"))
    names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  v.require(names.size() >= 8, "expected the full artifact set, found " +
                                   std::to_string(names.size()) + " files");
  for (const std::string& name : names) {
    const auto other = base / "b" / "out" / name;
    if (!std::filesystem::exists(other)) {
      v.require(false, name + " missing from the second run");
      continue;
    }
    v.require(read_bytes(base / "a" / "out" / name) == read_bytes(other),
              name + " differs between identical runs");
  }
  return v;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Verdict (*fn)();
  };
  const Entry checks[] = {
      {"effect-summary-closed-form", check_effect_summary_closed_form},
      {"weighted-terms-mean-identity", check_mean_identity},
      {"crossover-matches-closed-form", check_crossover_closed_form},
      {"odds-ratio-risk-table", check_odds_ratio_table},
      {"sampler-posterior-accuracy", check_sampler_accuracy},
      {"loss-difference-monotone", check_loss_monotonicity},
      {"crossover-ordering", check_crossover_ordering},
      {"cli-determinism", check_cli_determinism},
  };

  int failures = 0;
  for (const auto& check : checks) {
    Verdict v;
    try {
      v = check.fn();
    } catch (const std::exception& e) {
      v.problems.push_back(std::string("exception: ") + e.what());
    }
    v.name = check.name;
    if (v.ok()) {
      std::cout << "PASS " << v.name << "\n";
    } else {
      ++failures;
      std::cout << "FAIL " << v.name;
      for (const auto& p : v.problems) std::cout << "\n  " << p;
      std::cout << "\n";
    }
  }
  return failures == 0 ? 0 : 1;
}
