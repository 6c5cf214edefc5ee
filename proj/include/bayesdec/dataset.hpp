#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bayesdec/error.hpp"
#include "bayesdec/stats.hpp"

namespace bayesdec {

// Tabular binary-outcome data with one designated treatment column; all
// remaining numeric columns are covariates. An empty treatment_name (with an
// empty treatment column) means no treatment: the model is intercept plus
// covariates. Immutable after construction in practice: every transform
// returns a fresh copy.
struct Dataset {
  std::string outcome_name;
  std::string treatment_name;
  std::vector<double> outcome;    // each value 0 or 1
  std::vector<double> treatment;  // binary or continuous
  std::vector<std::string> covariate_names;
  std::vector<std::vector<double>> covariates;  // column-major

  std::size_t n_rows() const { return outcome.size(); }
  std::size_t n_covariates() const { return covariate_names.size(); }

  const std::vector<double>& column(const std::string& name) const {
    if (!name.empty()) {
      if (name == outcome_name) return outcome;
      if (name == treatment_name) return treatment;
      for (std::size_t j = 0; j < covariate_names.size(); ++j)
        if (covariate_names[j] == name) return covariates[j];
    }
    throw ValidationError("no column named '" + name + "'");
  }

  bool has_column(const std::string& name) const {
    if (name.empty()) return false;
    if (name == outcome_name || name == treatment_name) return true;
    for (const auto& c : covariate_names)
      if (c == name) return true;
    return false;
  }

  // Structural invariants: equal lengths, no non-finite cells, outcome coded
  // strictly {0,1}. Class balance is checked separately where it matters.
  void validate_structure() const {
    const std::size_t n = n_rows();
    if (n < 2) throw ValidationError("dataset needs at least 2 rows");
    if (treatment_name.empty()) {
      if (!treatment.empty())
        throw ValidationError("treatment values present but no treatment column named");
    } else if (treatment.size() != n) {
      throw ValidationError("treatment column length mismatch");
    }
    for (std::size_t j = 0; j < covariates.size(); ++j)
      if (covariates[j].size() != n)
        throw ValidationError("covariate '" + covariate_names[j] +
                              "' length mismatch");
    for (double y : outcome)
      if (!(y == 0.0 || y == 1.0))
        throw ValidationError("outcome column '" + outcome_name +
                              "' must contain only 0 or 1");
    auto check_finite = [](const std::vector<double>& col, const std::string& name) {
      for (double v : col)
        if (!std::isfinite(v))
          throw ValidationError("non-finite value in column '" + name + "'");
    };
    check_finite(treatment, treatment_name);
    for (std::size_t j = 0; j < covariates.size(); ++j)
      check_finite(covariates[j], covariate_names[j]);
  }

  bool outcome_has_both_classes() const {
    bool any0 = false, any1 = false;
    for (double y : outcome) (y == 0.0 ? any0 : any1) = true;
    return any0 && any1;
  }

  static bool is_binary(std::span<const double> col) {
    for (double v : col)
      if (!(v == 0.0 || v == 1.0)) return false;
    return true;
  }
};

}  // namespace bayesdec
