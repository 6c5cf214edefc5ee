#pragma once

// The three output figures: the posterior density split into intended /
// null / unintended regions, the probability-vs-revised-likelihood curve,
// and the expected-loss sweep panels. All render to static SVG strings.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bayesdec/effects.hpp"
#include "bayesdec/error.hpp"
#include "bayesdec/loss.hpp"
#include "bayesdec/stats.hpp"
#include "bayesdec/svg.hpp"

namespace bayesdec {

struct DensityGrid {
  std::vector<double> x;
  std::vector<double> density;
};

// Gaussian kernel density with Silverman's rule-of-thumb bandwidth,
// evaluated on an even grid padded three bandwidths past the sample range.
inline DensityGrid kernel_density(const std::vector<double>& values,
                                  std::size_t grid_n = 256) {
  if (values.size() < 2) throw ValidationError("kernel density needs >= 2 values");
  if (grid_n < 2) throw ValidationError("kernel density grid too small");
  const double sd = sample_sd(values);
  const double n = static_cast<double>(values.size());
  double h = 1.06 * sd * std::pow(n, -0.2);
  if (!(h > 0.0)) h = 1e-3;  // degenerate sample; keep the curve drawable

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - 3.0 * h;
  const double hi = *hi_it + 3.0 * h;

  DensityGrid g;
  g.x.resize(grid_n);
  g.density.assign(grid_n, 0.0);
  const double dx = (hi - lo) / static_cast<double>(grid_n - 1);
  for (std::size_t i = 0; i < grid_n; ++i) g.x[i] = lo + static_cast<double>(i) * dx;
  for (double v : values)
    for (std::size_t i = 0; i < grid_n; ++i)
      g.density[i] += normal_pdf((g.x[i] - v) / h);
  for (double& d : g.density) d /= n * h;
  return g;
}

namespace detail {

inline void axes_frame(svg::Document& doc, const svg::Axis& xa, const svg::Axis& ya,
                       const std::string& x_label, const std::string& y_label) {
  const std::string axis_style = "stroke:#000000;stroke-width:1";
  const std::string tick_style = "font-family:sans-serif;font-size:10px;fill:#000000";
  doc.line(xa.p0, ya.p0, xa.p1, ya.p0, axis_style);
  doc.line(xa.p0, ya.p0, xa.p0, ya.p1, axis_style);
  for (int i = 0; i <= 4; ++i) {
    const double fx = xa.d0 + (xa.d1 - xa.d0) * i / 4.0;
    const double fy = ya.d0 + (ya.d1 - ya.d0) * i / 4.0;
    doc.line(xa(fx), ya.p0, xa(fx), ya.p0 + 4, axis_style);
    doc.text(xa(fx) - 8, ya.p0 + 16, svg::fmt(fx), tick_style);
    doc.line(xa.p0 - 4, ya(fy), xa.p0, ya(fy), axis_style);
    doc.text(xa.p0 - 34, ya(fy) + 3, svg::fmt(fy), tick_style);
  }
  doc.text(0.5 * (xa.p0 + xa.p1) - 30, ya.p0 + 32, x_label, tick_style);
  doc.text(xa.p0 - 38, ya.p1 - 8, y_label, tick_style);
}

// Filled area under the density between data x-limits, clipped to the grid.
inline void shade_under(svg::Document& doc, const DensityGrid& g,
                        const svg::Axis& xa, const svg::Axis& ya, double from,
                        double to, const std::string& style,
                        const std::string& id) {
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(xa(std::max(from, g.x.front())), ya(0.0));
  for (std::size_t i = 0; i < g.x.size(); ++i)
    if (g.x[i] >= from && g.x[i] <= to) pts.emplace_back(xa(g.x[i]), ya(g.density[i]));
  pts.emplace_back(xa(std::min(to, g.x.back())), ya(0.0));
  if (pts.size() < 3) return;
  doc.polygon(pts, style, id);
}

}  // namespace detail

// Posterior density with the intended mass shaded grey, the unintended mass
// white, the practically-null band between the thresholds black, a solid
// vertical line at the intended-range mean, and a dashed one at the
// unintended-range mean. Region elements carry stable ids so the output can
// be inspected mechanically.
inline std::string density_figure(const std::vector<double>& pooled_draws,
                                  const EffectThresholds& thr,
                                  const EffectSummary& summary,
                                  const std::string& param_label) {
  thr.validate();
  const DensityGrid g = kernel_density(pooled_draws);
  const double peak = *std::max_element(g.density.begin(), g.density.end());

  const double w = 480, h = 360;
  svg::Document doc(w, h);
  svg::Axis xa{g.x.front(), g.x.back(), 52, w - 16};
  svg::Axis ya{0.0, peak * 1.08, h - 40, 16};

  const double md = thr.theta_md ? *thr.theta_md : 0.0;
  const double mu = thr.theta_mu;
  detail::shade_under(doc, g, xa, ya, g.x.front(), md,
                      "fill:#b0b0b0;stroke:none", "intended-region");
  detail::shade_under(doc, g, xa, ya, mu, g.x.back(),
                      "fill:#ffffff;stroke:#c0c0c0;stroke-width:0.5",
                      "unintended-region");
  if (mu > md)
    detail::shade_under(doc, g, xa, ya, md, mu, "fill:#000000;stroke:none",
                        "null-region");

  std::vector<std::pair<double, double>> curve;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    curve.emplace_back(xa(g.x[i]), ya(g.density[i]));
  doc.polyline(curve, "fill:none;stroke:#000000;stroke-width:1.2", "density");

  if (summary.theta_int)
    doc.line(xa(*summary.theta_int), ya.p0, xa(*summary.theta_int), ya.p1,
             "stroke:#000000;stroke-width:1.5", "intended-mean");
  if (summary.theta_unint)
    doc.line(xa(*summary.theta_unint), ya.p0, xa(*summary.theta_unint), ya.p1,
             "stroke:#000000;stroke-width:1.5;stroke-dasharray:6,4",
             "unintended-mean");

  detail::axes_frame(doc, xa, ya, param_label, "density");
  return doc.render();
}

// Probability of reaching each effect size against the event likelihood it
// would produce. Dots joined by a line, ordered by revised likelihood; the
// baseline likelihood is marked with a dotted vertical rule.
inline std::string prob_curve_figure(const std::vector<ProbCurvePoint>& points,
                                     double baseline_likelihood) {
  if (points.empty()) throw ValidationError("prob_curve_figure: no points");
  std::vector<ProbCurvePoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(),
            [](const ProbCurvePoint& a, const ProbCurvePoint& b) {
              return a.revised_likelihood < b.revised_likelihood;
            });

  const double w = 480, h = 360;
  svg::Document doc(w, h);
  double x_hi = std::max(baseline_likelihood, sorted.back().revised_likelihood);
  svg::Axis xa{0.0, x_hi * 1.05, 52, w - 16};
  svg::Axis ya{0.0, 1.0, h - 40, 16};

  doc.line(xa(baseline_likelihood), ya.p0, xa(baseline_likelihood), ya.p1,
           "stroke:#808080;stroke-width:1;stroke-dasharray:2,3", "baseline");

  std::vector<std::pair<double, double>> curve;
  for (const auto& pt : sorted)
    curve.emplace_back(xa(pt.revised_likelihood), ya(pt.probability));
  doc.polyline(curve, "fill:none;stroke:#000000;stroke-width:1.2", "prob-curve");
  for (const auto& pt : curve)
    doc.circle(pt.first, pt.second, 3.0, "fill:#000000;stroke:none");

  detail::axes_frame(doc, xa, ya, "revised event likelihood", "probability");
  return doc.render();
}

struct SweepPanel {
  std::string label;
  DecisionCurve curve;
};

// Expected-loss sweeps, one panel per threshold choice, laid out two per
// row. Black dots are the implement losses, grey dots the not-implement
// losses; a dotted rule marks the crossover where one exists.
inline std::string decision_figure(const std::vector<SweepPanel>& panels) {
  if (panels.empty()) throw ValidationError("decision_figure: no panels");
  const std::size_t n_cols = panels.size() > 1 ? 2 : 1;
  const std::size_t n_rows = (panels.size() + n_cols - 1) / n_cols;
  const double pw = 380, ph = 300;
  svg::Document doc(pw * static_cast<double>(n_cols),
                    ph * static_cast<double>(n_rows));

  const std::string label_style = "font-family:sans-serif;font-size:11px;fill:#000000";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& panel = panels[k];
    if (panel.curve.points.empty())
      throw ValidationError("decision_figure: empty curve");
    const double ox = pw * static_cast<double>(k % n_cols);
    const double oy = ph * static_cast<double>(k / n_cols);

    double loss_hi = 0.0;
    for (const auto& pt : panel.curve.points)
      loss_hi = std::max({loss_hi, pt.loss_implement, pt.loss_not});
    svg::Axis xa{0.0, panel.curve.points.back().ratio * 1.02, ox + 52, ox + pw - 16};
    svg::Axis ya{0.0, loss_hi * 1.05, oy + ph - 40, oy + 24};

    if (panel.curve.crossover_ratio)
      doc.line(xa(*panel.curve.crossover_ratio), ya.p0,
               xa(*panel.curve.crossover_ratio), ya.p1,
               "stroke:#808080;stroke-width:1;stroke-dasharray:2,3",
               "crossover-" + std::to_string(k));
    for (const auto& pt : panel.curve.points) {
      doc.circle(xa(pt.ratio), ya(pt.loss_implement), 1.8,
                 "fill:#000000;stroke:none");
      doc.circle(xa(pt.ratio), ya(pt.loss_not), 1.8, "fill:#a0a0a0;stroke:none");
    }
    doc.text(ox + 60, oy + 16, panel.label, label_style);
    detail::axes_frame(doc, xa, ya, "cost ratio", "expected loss");
  }
  return doc.render();
}

}  // namespace bayesdec
