#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "bayesdec/csv.hpp"
#include "bayesdec/error.hpp"

namespace bayesdec {

// Centering/prior-scaling record for one parameter, as applied during
// sampling. Reported draws are always back on the original scale.
struct ParamScale {
  std::string name;
  double center = 0.0;    // subtracted from the predictor while sampling
  double sd = 0.0;        // sample sd of the predictor (0 for the intercept)
  double prior_sd = 0.0;  // effective prior sd used for this coefficient
};

// Labeled post-warmup MCMC draws, [chain][iteration][parameter].
class PosteriorDraws {
 public:
  PosteriorDraws() = default;

  PosteriorDraws(std::vector<std::string> names, std::size_t n_chains,
                 std::size_t n_kept)
      : names_(std::move(names)),
        n_chains_(n_chains),
        n_kept_(n_kept),
        values_(n_chains * n_kept * names_.size(), 0.0) {
    for (std::size_t c = 0; c < n_chains; ++c) {
      chain_ids_.push_back(static_cast<std::int64_t>(c + 1));
      iteration_labels_.emplace_back();
      for (std::size_t i = 0; i < n_kept; ++i)
        iteration_labels_.back().push_back(static_cast<std::int64_t>(i + 1));
    }
    check_unique_names();
  }

  std::size_t n_chains() const { return n_chains_; }
  std::size_t n_kept() const { return n_kept_; }
  std::size_t n_params() const { return names_.size(); }
  std::size_t n_total() const { return n_chains_ * n_kept_; }

  const std::vector<std::string>& parameter_names() const { return names_; }
  const std::vector<std::int64_t>& chain_ids() const { return chain_ids_; }
  std::vector<ParamScale>& scale_info() { return scale_info_; }
  const std::vector<ParamScale>& scale_info() const { return scale_info_; }

  double& at(std::size_t chain, std::size_t iter, std::size_t param) {
    return values_[(chain * n_kept_ + iter) * names_.size() + param];
  }
  double at(std::size_t chain, std::size_t iter, std::size_t param) const {
    return values_[(chain * n_kept_ + iter) * names_.size() + param];
  }

  std::size_t param_index(const std::string& name) const {
    for (std::size_t p = 0; p < names_.size(); ++p)
      if (names_[p] == name) return p;
    std::ostringstream msg;
    msg << "no parameter named '" << name << "'; available:";
    for (const auto& n : names_) msg << " " << n;
    throw ValidationError(msg.str());
  }

  bool has_param(const std::string& name) const {
    for (const auto& n : names_)
      if (n == name) return true;
    return false;
  }

  // All chains pooled, chain-major order.
  std::vector<double> pooled(const std::string& name) const {
    const std::size_t p = param_index(name);
    std::vector<double> out;
    out.reserve(n_total());
    for (std::size_t c = 0; c < n_chains_; ++c)
      for (std::size_t i = 0; i < n_kept_; ++i) out.push_back(at(c, i, p));
    return out;
  }

  std::vector<double> chain_values(std::size_t chain, std::size_t param) const {
    std::vector<double> out;
    out.reserve(n_kept_);
    for (std::size_t i = 0; i < n_kept_; ++i) out.push_back(at(chain, i, param));
    return out;
  }

  void validate() const {
    if (names_.empty()) throw ValidationError("posterior draws have no parameters");
    if (n_chains_ == 0 || n_kept_ == 0)
      throw ValidationError("posterior draws are empty");
    check_unique_names();
    for (double v : values_)
      if (!std::isfinite(v))
        throw ValidationError("posterior draws contain a non-finite value");
  }

  void set_chain_id(std::size_t chain, std::int64_t id) { chain_ids_[chain] = id; }
  void set_iteration_label(std::size_t chain, std::size_t iter, std::int64_t label) {
    iteration_labels_[chain][iter] = label;
  }
  std::int64_t iteration_label(std::size_t chain, std::size_t iter) const {
    return iteration_labels_[chain][iter];
  }

 private:
  void check_unique_names() const {
    for (std::size_t a = 0; a < names_.size(); ++a)
      for (std::size_t b = a + 1; b < names_.size(); ++b)
        if (names_[a] == names_[b])
          throw ValidationError("duplicate parameter name '" + names_[a] + "'");
  }

  std::vector<std::string> names_;
  std::size_t n_chains_ = 0;
  std::size_t n_kept_ = 0;
  std::vector<double> values_;
  std::vector<std::int64_t> chain_ids_;
  std::vector<std::vector<std::int64_t>> iteration_labels_;
  std::vector<ParamScale> scale_info_;
};

// Draws CSV schema: header `chain,iter,<param...>`, one row per kept
// iteration. Chain ids are labels; gaps are fine.
inline void export_draws(const PosteriorDraws& draws, const std::string& path) {
  std::ostringstream out;
  out << "chain,iter";
  for (const auto& name : draws.parameter_names()) out << "," << name;
  out << "\n";
  for (std::size_t c = 0; c < draws.n_chains(); ++c) {
    for (std::size_t i = 0; i < draws.n_kept(); ++i) {
      out << draws.chain_ids()[c] << "," << draws.iteration_label(c, i);
      for (std::size_t p = 0; p < draws.n_params(); ++p)
        out << "," << csv::format_double(draws.at(c, i, p));
      out << "\n";
    }
  }
  csv::write_file(path, out.str());
}

inline PosteriorDraws import_draws(const std::string& path) {
  const csv::Table table = csv::read_table(path);
  if (table.header.size() < 3 || table.header[0] != "chain" || table.header[1] != "iter")
    throw ValidationError(path + ": draws header must be chain,iter,<param...>");
  std::vector<std::string> names(table.header.begin() + 2, table.header.end());
  if (table.rows.empty()) throw ValidationError(path + ": no draws");

  // group rows by chain label, order of first appearance
  std::vector<std::int64_t> chain_order;
  std::vector<std::vector<std::size_t>> chain_rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto id = csv::parse_int(table.rows[r][0]);
    if (!id)
      throw ValidationError(path + ": row " + std::to_string(r + 2) +
                            " has a non-integer chain id");
    std::size_t slot = chain_order.size();
    for (std::size_t c = 0; c < chain_order.size(); ++c)
      if (chain_order[c] == *id) slot = c;
    if (slot == chain_order.size()) {
      chain_order.push_back(*id);
      chain_rows.emplace_back();
    }
    chain_rows[slot].push_back(r);
  }
  const std::size_t n_kept = chain_rows[0].size();
  for (std::size_t c = 1; c < chain_rows.size(); ++c)
    if (chain_rows[c].size() != n_kept)
      throw ValidationError(path + ": chains have differing numbers of iterations");

  PosteriorDraws draws(names, chain_rows.size(), n_kept);
  for (std::size_t c = 0; c < chain_rows.size(); ++c) {
    draws.set_chain_id(c, chain_order[c]);
    for (std::size_t i = 0; i < n_kept; ++i) {
      const std::size_t r = chain_rows[c][i];
      const auto iter = csv::parse_int(table.rows[r][1]);
      if (!iter)
        throw ValidationError(path + ": row " + std::to_string(r + 2) +
                              " has a non-integer iter");
      draws.set_iteration_label(c, i, *iter);
      for (std::size_t p = 0; p < names.size(); ++p) {
        const auto v = csv::parse_double(table.rows[r][p + 2]);
        if (!v)
          throw ValidationError(path + ": row " + std::to_string(r + 2) +
                                " has a non-numeric value in column '" + names[p] + "'");
        draws.at(c, i, p) = *v;
      }
    }
  }
  draws.validate();
  return draws;
}

}  // namespace bayesdec
