#pragma once

// Built-in sanity checks runnable from the CLI on any install. Each check
// prints one line; the run fails if any check does. These are quick
// cross-checks of the numerical core against closed forms, not a
// replacement for the full test suite.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "bayesdec/config.hpp"
#include "bayesdec/effects.hpp"
#include "bayesdec/logit.hpp"
#include "bayesdec/loss.hpp"
#include "bayesdec/rng.hpp"
#include "bayesdec/stats.hpp"

namespace bayesdec {

namespace detail {

struct SelftestState {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& info = "") {
    if (ok) {
      out << "ok      " << name << "\n";
    } else {
      ++failures;
      out << "FAILED  " << name << (info.empty() ? "" : ": " + info) << "\n";
    }
  }
};

// Closed forms for a normal truncated at t: the tail mass and the mean
// within the tail.
inline double normal_tail_mass_below(double m, double s, double t) {
  return normal_cdf((t - m) / s);
}
inline double normal_mean_below(double m, double s, double t) {
  const double a = (t - m) / s;
  return m - s * normal_pdf(a) / normal_cdf(a);
}
inline double normal_mean_above(double m, double s, double t) {
  const double a = (t - m) / s;
  return m + s * normal_pdf(a) / (1.0 - normal_cdf(a));
}

}  // namespace detail

inline int run_selftest(std::ostream& out) {
  detail::SelftestState t{out};

  {
    Xoshiro256pp a(42), b(42), c(43);
    bool same = true, differ = false;
    for (int i = 0; i < 64; ++i) {
      const std::uint64_t x = a.next_u64();
      if (x != b.next_u64()) same = false;
      if (x != c.next_u64()) differ = true;
    }
    t.check("rng determinism", same && differ);
  }

  {
    // past |x| ~ 15 the round trip degrades with 1-p itself, so the strict
    // band is checked only where doubles can support it
    bool ok = true;
    for (double x = -15.0; x <= 15.0; x += 0.37) {
      const double y = inv_logit(x);
      if (!(y > 0.0 && y < 1.0) || std::fabs(logit(y) - x) > 1e-9 * (1 + std::fabs(x)))
        ok = false;
    }
    for (double x = -30.0; x <= 30.0; x += 1.7) {
      const double y = inv_logit(x);
      if (!(y > 0.0 && y < 1.0) || std::fabs(logit(y) - x) > 0.01 * (1 + std::fabs(x)))
        ok = false;
    }
    t.check("logit round trip", ok);
  }

  {
    // Monte Carlo vs closed form for a truncated normal; the sample is big
    // enough that 5 sigma of Monte Carlo noise is well inside the bound.
    Xoshiro256pp rng(7);
    std::vector<double> draws(200000);
    for (double& d : draws) d = rng.normal(-0.5, 0.5);
    const EffectSummary s =
        effect_summary(draws, EffectThresholds::at(-0.5, 0.5));
    const double p_exact = detail::normal_tail_mass_below(-0.5, 0.5, -0.5);
    const double m_exact = detail::normal_mean_below(-0.5, 0.5, -0.5);
    const bool ok = std::fabs(s.p - p_exact) < 0.005 &&
                    s.theta_int.has_value() &&
                    std::fabs(*s.theta_int - m_exact) < 0.01 &&
                    std::fabs(*s.theta_unint -
                              detail::normal_mean_above(-0.5, 0.5, 0.5)) < 0.05;
    t.check("truncated-normal summary", ok);
  }

  {
    Xoshiro256pp rng(11);
    bool ok = true;
    for (int rep = 0; rep < 20 && ok; ++rep) {
      std::vector<double> draws(5000);
      for (double& d : draws) d = rng.normal(rng.uniform(-1.0, 1.0), 0.8);
      const auto [total, sample_mean] = mean_identity_check(draws);
      const double scale = std::max(1.0, std::fabs(sample_mean));
      if (std::fabs(total - sample_mean) > 1e-12 * scale) ok = false;
    }
    t.check("mean identity", ok);
  }

  {
    Xoshiro256pp rng(13);
    bool ok = true;
    for (int rep = 0; rep < 200 && ok; ++rep) {
      const double pi = rng.uniform(-3.0, 3.0);
      const double delta = rng.uniform(-3.0, 0.0);
      EffectSummary s;
      s.p_theta_int = delta;
      const DecisionCurve curve = cost_ratio_sweep(pi, s);
      const double crit = critical_ratio(pi, s);
      if (curve.crossover_ratio) {
        if (std::fabs(*curve.crossover_ratio - crit) > 0.01 + 1e-9) ok = false;
      } else {
        // implementing never won on the grid, so the flip sits below the
        // smallest ratio
        if (crit > 0.01 + 1e-9) ok = false;
      }
    }
    t.check("critical ratio vs sweep", ok);
  }

  {
    AnalysisConfig c;
    c.data_path = "data.csv";
    c.outcome = "y";
    c.treatment = "d";
    c.drop = {"x9"};
    c.theta_md_or = 0.5;
    c.baseline_overrides = {{"x1", 0.0}, {"x2", 1.5}};
    c.sampler.seed = 99;
    const AnalysisConfig back = parse_config(config_to_string(c));
    t.check("config round trip", config_to_map(back) == config_to_map(c));
  }

  if (t.failures == 0) {
    out << "all checks passed\n";
    return 0;
  }
  out << t.failures << " check(s) failed\n";
  return 1;
}

}  // namespace bayesdec
