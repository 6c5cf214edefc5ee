#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bayesdec/csv.hpp"
#include "bayesdec/dataset.hpp"
#include "bayesdec/error.hpp"

namespace bayesdec {

struct Recode {
  std::string column;
  std::string transform;  // e.g. "flip: x -> 1 - x"
};

// Outcome/treatment coding is a semantic contract the machine cannot verify;
// this report carries what was checked and what the user must confirm.
struct CodingReport {
  bool outcome_ok = false;
  std::string treatment_direction_note;
  std::vector<Recode> recodes_applied;
};

// Loads a dataset CSV. One column is the outcome, one the treatment; every
// other numeric column becomes a covariate unless listed in `drop`. Rows with
// missing or non-numeric cells are rejected, all offenders listed by line.
inline Dataset load_dataset(const std::string& path, const std::string& outcome,
                            const std::string& treatment,
                            const std::vector<std::string>& drop = {}) {
  if (outcome == treatment)
    throw ValidationError("outcome and treatment must be different columns");
  const csv::Table table = csv::read_table(path);

  auto col_index = [&](const std::string& name) -> std::size_t {
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end())
      throw ValidationError(path + ": no column named '" + name + "'");
    return static_cast<std::size_t>(it - table.header.begin());
  };
  const std::size_t y_idx = col_index(outcome);
  const std::size_t d_idx = col_index(treatment);

  std::set<std::string> dropped(drop.begin(), drop.end());
  for (const auto& name : drop)
    if (std::find(table.header.begin(), table.header.end(), name) == table.header.end())
      throw ValidationError(path + ": --drop column '" + name + "' not present");
  if (dropped.count(outcome) || dropped.count(treatment))
    throw ValidationError("cannot drop the outcome or treatment column");

  Dataset data;
  data.outcome_name = outcome;
  data.treatment_name = treatment;
  std::vector<std::size_t> cov_idx;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j == y_idx || j == d_idx) continue;
    if (dropped.count(table.header[j])) continue;
    data.covariate_names.push_back(table.header[j]);
    cov_idx.push_back(j);
  }
  data.covariates.resize(cov_idx.size());

  std::vector<std::size_t> bad_rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    bool ok = true;
    auto need = [&](std::size_t j) {
      auto v = csv::parse_double(cells[j]);
      if (!v) ok = false;
      return v.value_or(0.0);
    };
    const double y = need(y_idx);
    const double d = need(d_idx);
    std::vector<double> covs(cov_idx.size());
    for (std::size_t k = 0; k < cov_idx.size(); ++k) covs[k] = need(cov_idx[k]);
    if (!ok) {
      bad_rows.push_back(r + 2);  // +1 header, +1 one-based
      continue;
    }
    data.outcome.push_back(y);
    data.treatment.push_back(d);
    for (std::size_t k = 0; k < cov_idx.size(); ++k) data.covariates[k].push_back(covs[k]);
  }
  if (!bad_rows.empty()) {
    std::ostringstream msg;
    msg << path << ": missing or non-numeric cells on row";
    msg << (bad_rows.size() > 1 ? "s " : " ");
    for (std::size_t i = 0; i < bad_rows.size(); ++i)
      msg << (i ? ", " : "") << bad_rows[i];
    throw ValidationError(msg.str());
  }

  data.validate_structure();
  return data;
}

// Maps a binary {0,1} column through x -> 1 - x. Applying it twice restores
// the input exactly.
inline std::pair<Dataset, CodingReport> flip_binary(const Dataset& data,
                                                    const std::string& column) {
  Dataset out = data;
  std::vector<double>* col = nullptr;
  if (column == out.treatment_name) {
    col = &out.treatment;
  } else if (column == out.outcome_name) {
    col = &out.outcome;
  } else {
    for (std::size_t j = 0; j < out.covariate_names.size(); ++j)
      if (out.covariate_names[j] == column) col = &out.covariates[j];
  }
  if (!col) throw ValidationError("flip_binary: no column named '" + column + "'");
  if (!Dataset::is_binary(*col))
    throw ValidationError("flip_binary: column '" + column + "' is not binary {0,1}");
  for (double& v : *col) v = 1.0 - v;

  CodingReport report;
  report.outcome_ok = true;
  report.recodes_applied.push_back({column, "flip: x -> 1 - x"});
  return {std::move(out), std::move(report)};
}

// Checks the structural prerequisites for the loss function and emits the
// advisories that cannot be machine-checked: outcome value 1 must mean the
// undesirable event, and a higher treatment value must mean the direction
// intended to reduce its likelihood.
inline CodingReport validate_coding(const Dataset& data) {
  data.validate_structure();
  if (!data.outcome_has_both_classes())
    throw ValidationError("outcome column '" + data.outcome_name +
                          "' has a single class; both 0 and 1 are required");
  CodingReport report;
  report.outcome_ok = true;
  std::ostringstream note;
  note << "Confirm the coding before fitting: outcome '" << data.outcome_name
       << "' = 1 must mean the undesirable event, and a higher value of treatment '"
       << data.treatment_name
       << "' must mean the direction intended to reduce its likelihood.";
  if (!Dataset::is_binary(data.treatment)) {
    note << " Treatment is continuous: choose the unit change of interest "
            "(--unit-change) when summarizing effects.";
  }
  report.treatment_direction_note = note.str();
  return report;
}

}  // namespace bayesdec
