#pragma once

// Analysis configuration shared by the CLI subcommands. Persisted as a flat
// key = value file ('#' starts a comment, lists are comma-separated) that
// round-trips losslessly; command-line flags override file values.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bayesdec/csv.hpp"
#include "bayesdec/effects.hpp"
#include "bayesdec/error.hpp"
#include "bayesdec/sampler.hpp"

namespace bayesdec {

struct AnalysisConfig {
  // inputs and outputs
  std::optional<std::string> data_path;
  std::optional<std::string> draws_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> outcome;
  std::optional<std::string> treatment;
  std::optional<std::string> param;
  std::vector<std::string> drop;

  // sampler
  SamplerConfig sampler;

  // effect thresholds; at most one of the theta_md forms may be set, none
  // meaning the strict negative range
  std::optional<double> theta_md_or;
  std::optional<double> theta_md_log;
  double theta_mu_log = 0.0;
  double unit_change = 1.0;

  // baseline profile
  std::map<std::string, double> baseline_overrides;

  // cost-ratio sweep
  double grid_step = 0.01;
  double grid_min = 0.01;
  double grid_max = 1.0;
  std::vector<double> sweep_ors = {0.5, 0.25, 0.1, 0.05};

  // probability curve
  std::vector<double> curve_ors;  // empty = default grid 0.95 .. 0.05
  CurveMode curve_mode = CurveMode::kConditionalMean;

  // behavior toggles
  bool emit_plots = true;
  bool allow_unconverged = false;
  bool confirm_coding = false;

  EffectThresholds thresholds() const {
    if (theta_md_or && theta_md_log)
      throw ValidationError("set only one of theta_md_or / theta_md_log");
    EffectThresholds thr;
    if (theta_md_or) thr.theta_md = or_to_logodds(*theta_md_or);
    if (theta_md_log) thr.theta_md = *theta_md_log;
    thr.theta_mu = theta_mu_log;
    thr.unit_change = unit_change;
    thr.validate();
    return thr;
  }

  std::vector<double> curve_or_grid() const {
    if (!curve_ors.empty()) return curve_ors;
    std::vector<double> grid;
    for (int i = 19; i >= 1; --i) grid.push_back(0.05 * i);
    return grid;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double require_double(const std::string& s, const std::string& key) {
  const auto v = csv::parse_double(s);
  if (!v) throw ValidationError("config key '" + key + "': expected a number, got '" +
                                s + "'");
  return *v;
}

inline long long require_int(const std::string& s, const std::string& key) {
  const auto v = csv::parse_int(s);
  if (!v) throw ValidationError("config key '" + key + "': expected an integer, got '" +
                                s + "'");
  return *v;
}

inline std::vector<double> parse_double_list(const std::string& s,
                                             const std::string& key) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(require_double(item, key));
  return out;
}

inline bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ValidationError("config key '" + key + "': expected true or false, got '" +
                        s + "'");
}

inline std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += csv::format_double(v[i]);
  }
  return out;
}

inline std::string join_strings(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i];
  }
  return out;
}

}  // namespace detail

inline const char* curve_mode_name(CurveMode m) {
  return m == CurveMode::kThreshold ? "threshold" : "conditional-mean";
}

inline CurveMode parse_curve_mode(const std::string& s) {
  if (s == "threshold") return CurveMode::kThreshold;
  if (s == "conditional-mean") return CurveMode::kConditionalMean;
  throw ValidationError("curve_mode must be 'threshold' or 'conditional-mean', got '" +
                        s + "'");
}

// Ordered key/value view of the effective config; this single serialization
// feeds both the config file writer and the JSON report echo. Unset
// optional keys are omitted.
inline std::map<std::string, std::string> config_to_map(const AnalysisConfig& c) {
  std::map<std::string, std::string> m;
  if (c.data_path) m["data"] = *c.data_path;
  if (c.draws_path) m["draws"] = *c.draws_path;
  if (c.out_dir) m["out_dir"] = *c.out_dir;
  if (c.outcome) m["outcome"] = *c.outcome;
  if (c.treatment) m["treatment"] = *c.treatment;
  if (c.param) m["param"] = *c.param;
  if (!c.drop.empty()) m["drop"] = detail::join_strings(c.drop);

  m["n_chains"] = std::to_string(c.sampler.n_chains);
  m["n_iter"] = std::to_string(c.sampler.n_iter);
  m["n_warmup"] = std::to_string(c.sampler.n_warmup);
  m["seed"] = std::to_string(c.sampler.seed);
  m["coef_prior_scale"] = csv::format_double(c.sampler.coef_prior_scale);
  m["intercept_prior_sd"] = csv::format_double(c.sampler.intercept_prior_sd);
  m["target_accept"] = csv::format_double(c.sampler.target_accept);

  if (c.theta_md_or) m["theta_md_or"] = csv::format_double(*c.theta_md_or);
  if (c.theta_md_log) m["theta_md_log"] = csv::format_double(*c.theta_md_log);
  m["theta_mu_log"] = csv::format_double(c.theta_mu_log);
  m["unit_change"] = csv::format_double(c.unit_change);

  if (!c.baseline_overrides.empty()) {
    std::string s;
    for (const auto& [col, val] : c.baseline_overrides) {
      if (!s.empty()) s += ",";
      s += col + "=" + csv::format_double(val);
    }
    m["baseline_override"] = s;
  }

  m["grid_step"] = csv::format_double(c.grid_step);
  m["grid_min"] = csv::format_double(c.grid_min);
  m["grid_max"] = csv::format_double(c.grid_max);
  if (!c.sweep_ors.empty()) m["sweep_ors"] = detail::join_doubles(c.sweep_ors);
  if (!c.curve_ors.empty()) m["curve_ors"] = detail::join_doubles(c.curve_ors);
  m["curve_mode"] = curve_mode_name(c.curve_mode);

  m["emit_plots"] = c.emit_plots ? "true" : "false";
  m["allow_unconverged"] = c.allow_unconverged ? "true" : "false";
  m["confirm_coding"] = c.confirm_coding ? "true" : "false";
  return m;
}

inline void apply_config_entry(AnalysisConfig& c, const std::string& key,
                               const std::string& value) {
  const auto num = [&] { return detail::require_double(value, key); };
  const auto integer = [&] {
    const long long v = detail::require_int(value, key);
    if (v < 0 || v > 1000000000)
      throw ValidationError("config key '" + key + "' out of range");
    return static_cast<int>(v);
  };
  if (key == "data") c.data_path = value;
  else if (key == "draws") c.draws_path = value;
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "outcome") c.outcome = value;
  else if (key == "treatment") c.treatment = value;
  else if (key == "param") c.param = value;
  else if (key == "drop") c.drop = detail::split_list(value);
  else if (key == "n_chains") c.sampler.n_chains = integer();
  else if (key == "n_iter") c.sampler.n_iter = integer();
  else if (key == "n_warmup") c.sampler.n_warmup = integer();
  else if (key == "seed")
    c.sampler.seed = static_cast<std::uint64_t>(detail::require_int(value, key));
  else if (key == "coef_prior_scale") c.sampler.coef_prior_scale = num();
  else if (key == "intercept_prior_sd") c.sampler.intercept_prior_sd = num();
  else if (key == "target_accept") c.sampler.target_accept = num();
  else if (key == "theta_md_or") c.theta_md_or = num();
  else if (key == "theta_md_log") c.theta_md_log = num();
  else if (key == "theta_mu_log") c.theta_mu_log = num();
  else if (key == "unit_change") c.unit_change = num();
  else if (key == "baseline_override") {
    c.baseline_overrides.clear();
    for (const auto& item : detail::split_list(value)) {
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ValidationError("baseline_override entries must look like col=value, got '" +
                              item + "'");
      c.baseline_overrides[detail::trim(item.substr(0, eq))] =
          detail::require_double(detail::trim(item.substr(eq + 1)), key);
    }
  } else if (key == "grid_step") c.grid_step = num();
  else if (key == "grid_min") c.grid_min = num();
  else if (key == "grid_max") c.grid_max = num();
  else if (key == "sweep_ors") c.sweep_ors = detail::parse_double_list(value, key);
  else if (key == "curve_ors") c.curve_ors = detail::parse_double_list(value, key);
  else if (key == "curve_mode") c.curve_mode = parse_curve_mode(value);
  else if (key == "emit_plots") c.emit_plots = detail::parse_bool(value, key);
  else if (key == "allow_unconverged") c.allow_unconverged = detail::parse_bool(value, key);
  else if (key == "confirm_coding") c.confirm_coding = detail::parse_bool(value, key);
  else throw ValidationError("unknown config key '" + key + "'");
}

inline std::string config_to_string(const AnalysisConfig& c) {
  std::ostringstream out;
  for (const auto& [key, value] : config_to_map(c)) out << key << " = " << value << "\n";
  return out.str();
}

inline AnalysisConfig parse_config(const std::string& text,
                                   AnalysisConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    apply_config_entry(base, key, value);
  }
  return base;
}

inline AnalysisConfig load_config(const std::string& path, AnalysisConfig base = {}) {
  return parse_config(csv::read_file(path), std::move(base));
}

inline void save_config(const AnalysisConfig& c, const std::string& path) {
  csv::write_file(path, config_to_string(c));
}

}  // namespace bayesdec
