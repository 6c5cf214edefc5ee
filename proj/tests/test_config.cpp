#include "catch2/catch_amalgamated.hpp"

#include <cmath>

#include "bayesdec/config.hpp"

using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
using namespace bayesdec;

TEST_CASE("defaults are sensible", "[config]") {
  const AnalysisConfig c;
  REQUIRE(c.grid_step == 0.01);
  REQUIRE(c.grid_min == 0.01);
  REQUIRE(c.grid_max == 1.0);
  REQUIRE(c.sweep_ors == std::vector<double>{0.5, 0.25, 0.1, 0.05});
  REQUIRE(c.curve_mode == CurveMode::kConditionalMean);
  REQUIRE(c.sampler.n_chains == 4);
  REQUIRE(c.emit_plots);
  REQUIRE_FALSE(c.confirm_coding);

  // default probability-curve grid: odds ratios 0.95 down to 0.05
  const std::vector<double> grid = c.curve_or_grid();
  REQUIRE(grid.size() == 19);
  REQUIRE(grid.front() == Approx(0.95));
  REQUIRE(grid.back() == Approx(0.05));

  // unset thresholds mean the strict-negative range
  REQUIRE(c.thresholds().is_strict_negative());
}

TEST_CASE("a fully populated config round-trips losslessly", "[config]") {
  AnalysisConfig c;
  c.data_path = "data/trial.csv";
  c.draws_path = "out/draws.csv";
  c.out_dir = "out";
  c.outcome = "y";
  c.treatment = "d";
  c.param = "d";
  c.drop = {"id", "site"};
  c.sampler.n_chains = 3;
  c.sampler.n_iter = 7000;
  c.sampler.n_warmup = 1500;
  c.sampler.seed = 987654321098765ULL;
  c.sampler.coef_prior_scale = 1.75;
  c.sampler.intercept_prior_sd = 5.5;
  c.sampler.target_accept = 0.3;
  c.theta_md_log = -0.5;
  c.theta_mu_log = 0.1;
  c.unit_change = 2.5;
  c.baseline_overrides = {{"age", 50.0}, {"x1", -0.25}};
  c.grid_step = 0.005;
  c.grid_min = 0.005;
  c.grid_max = 0.9;
  c.sweep_ors = {0.4, 0.2};
  c.curve_ors = {0.9, 0.5, 0.1};
  c.curve_mode = CurveMode::kThreshold;
  c.emit_plots = false;
  c.allow_unconverged = true;
  c.confirm_coding = true;

  const AnalysisConfig back = parse_config(config_to_string(c));
  REQUIRE(config_to_map(back) == config_to_map(c));
  REQUIRE(back.sampler.seed == c.sampler.seed);
  REQUIRE(back.baseline_overrides == c.baseline_overrides);
  REQUIRE(back.curve_mode == CurveMode::kThreshold);
}

TEST_CASE("later entries override earlier state", "[config]") {
  AnalysisConfig base;
  base.sampler.seed = 5;
  base.outcome = "y";
  const AnalysisConfig merged = parse_config("seed = 99\ntreatment = d\n", base);
  REQUIRE(merged.sampler.seed == 99);  // overridden
  REQUIRE(merged.outcome == "y");      // kept from the base
  REQUIRE(merged.treatment == "d");    // added
}

TEST_CASE("comments, blank lines and spacing are tolerated", "[config]") {
  const AnalysisConfig c = parse_config(
      "# analysis settings\n"
      "\n"
      "  seed   =  42   # inline note\n"
      "sweep_ors = 0.5 , 0.25\n");
  REQUIRE(c.sampler.seed == 42);
  REQUIRE(c.sweep_ors == std::vector<double>{0.5, 0.25});
}

TEST_CASE("malformed config lines are rejected with line numbers", "[config]") {
  REQUIRE_THROWS_WITH(parse_config("seed = 1\nnot a pair\n"),
                      ContainsSubstring("line 2"));
  REQUIRE_THROWS_WITH(parse_config("= 3\n"), ContainsSubstring("line 1"));
  REQUIRE_THROWS_WITH(parse_config("mystery_key = 1\n"),
                      ContainsSubstring("mystery_key"));
  REQUIRE_THROWS_WITH(parse_config("emit_plots = yes\n"),
                      ContainsSubstring("true or false"));
  REQUIRE_THROWS_WITH(parse_config("grid_step = wide\n"),
                      ContainsSubstring("expected a number"));
  REQUIRE_THROWS_WITH(parse_config("n_iter = 2.5\n"),
                      ContainsSubstring("expected an integer"));
  REQUIRE_THROWS_AS(parse_config("n_iter = -3\n"), ValidationError);
}

TEST_CASE("baseline overrides parse as col=value pairs", "[config]") {
  const AnalysisConfig c = parse_config("baseline_override = age=50, x1 = -0.25\n");
  REQUIRE(c.baseline_overrides.at("age") == 50.0);
  REQUIRE(c.baseline_overrides.at("x1") == -0.25);
  REQUIRE_THROWS_WITH(parse_config("baseline_override = age\n"),
                      ContainsSubstring("col=value"));
  REQUIRE_THROWS_WITH(parse_config("baseline_override = =3\n"),
                      ContainsSubstring("col=value"));
}

TEST_CASE("threshold settings translate into effect thresholds", "[config]") {
  AnalysisConfig c = parse_config("theta_md_or = 0.5\ntheta_mu_log = 0.1\n");
  const EffectThresholds thr = c.thresholds();
  REQUIRE_FALSE(thr.is_strict_negative());
  REQUIRE(*thr.theta_md == Approx(std::log(0.5)));
  REQUIRE(thr.theta_mu == 0.1);

  c = parse_config("theta_md_log = -0.7\nunit_change = 2\n");
  REQUIRE(*c.thresholds().theta_md == -0.7);
  REQUIRE(c.thresholds().unit_change == 2.0);

  // both forms at once is ambiguous
  c = parse_config("theta_md_or = 0.5\ntheta_md_log = -0.7\n");
  REQUIRE_THROWS_WITH(c.thresholds(), ContainsSubstring("only one"));

  // a positive "minimum desired effect" makes no sense on the log-odds scale
  c = parse_config("theta_md_log = 0.4\n");
  REQUIRE_THROWS_AS(c.thresholds(), ValidationError);
}

TEST_CASE("custom curve grids win over the default", "[config]") {
  const AnalysisConfig c = parse_config("curve_ors = 0.8, 0.4, 0.2\n");
  REQUIRE(c.curve_or_grid() == std::vector<double>{0.8, 0.4, 0.2});
}

TEST_CASE("the serialized form is stable and ordered", "[config]") {
  const AnalysisConfig c;
  const std::string text = config_to_string(c);
  REQUIRE(config_to_string(parse_config(text)) == text);
  REQUIRE_THAT(text, ContainsSubstring("n_chains = 4"));
  REQUIRE_THAT(text, ContainsSubstring("curve_mode = conditional-mean"));
}
