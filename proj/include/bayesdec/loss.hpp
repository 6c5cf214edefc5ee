#pragma once

// Expected loss of implementing vs not implementing a policy, and the sweep
// over cost ratios that locates where the decision flips.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "bayesdec/effects.hpp"
#include "bayesdec/error.hpp"
#include "bayesdec/logit.hpp"

namespace bayesdec {

// One decision problem: baseline log odds of the (undesirable) event, the
// weighted effect summary, and the two unit costs. c_p is the cost of
// implementing the policy, c_e the cost of the event. Ratios c_p/c_e above
// 1 are legal but pointless: the policy then costs more than the event it
// prevents.
struct LossScenario {
  double pi = 0.0;
  EffectSummary summary;
  double c_p = 1.0;
  double c_e = 1.0;

  void validate() const {
    if (!std::isfinite(pi)) throw ValidationError("pi must be finite");
    if (!std::isfinite(summary.p_theta_int) || summary.p_theta_int > 0.0)
      throw ValidationError("p*theta_int must be finite and <= 0");
    if (!std::isfinite(summary.q_theta_unint) || summary.q_theta_unint < 0.0)
      throw ValidationError("q*theta_unint must be finite and >= 0");
    if (!(c_p > 0.0) || !(c_e > 0.0)) throw ValidationError("costs must be > 0");
  }
};

// Binary event. implement=false drops the policy cost and the effect terms:
//   E[loss] = c_p * I + c_e * inv_logit(pi + (p*theta_int + q*theta_unint) * I)
inline double expected_loss_binary(const LossScenario& s, bool implement) {
  s.validate();
  const double ind = implement ? 1.0 : 0.0;
  const double shift = s.summary.total_effect() * ind;
  return s.c_p * ind + s.c_e * inv_logit(s.pi + shift);
}

// Continuous outcome already on the cost scale; c_s is the status-quo cost,
// paid either way, and the effect terms enter only the implement arm:
//   E[loss] = c_p * I + c_s + f(p*theta_int + q*theta_unint) * I
// The transform f covers effects measured on some other scale; by default
// it is the identity. All quantities must share one cost scale; that is the
// caller's responsibility.
inline double expected_loss_continuous(
    double c_p, double c_s, const EffectSummary& summary, bool implement,
    const std::function<double(double)>& transform = nullptr) {
  if (!(c_p > 0.0)) throw ValidationError("costs must be > 0");
  if (!std::isfinite(c_s)) throw ValidationError("status-quo cost must be finite");
  const double ind = implement ? 1.0 : 0.0;
  const double total = summary.total_effect();
  const double effect = transform ? transform(total) : total;
  if (!std::isfinite(effect))
    throw ValidationError("effect transform produced a non-finite value");
  return c_p * ind + c_s + effect * ind;
}

struct DecisionPoint {
  double ratio = 0.0;  // c_p / c_e
  double loss_implement = 0.0;
  double loss_not = 0.0;
  bool implement = false;  // strict: loss_implement < loss_not
};

// Sweep of the decision over c_p/c_e with c_p held at 1 and c_e = 1/ratio.
// crossover_ratio is the largest grid ratio at which implementing still
// wins strictly (ties go to not-implement). It is absent when the decision
// never flips inside the grid: either implementing never wins, or it wins
// everywhere.
struct DecisionCurve {
  std::vector<DecisionPoint> points;
  std::optional<double> crossover_ratio;
  double grid_step = 0.0;
};

// Where the decision flips, in closed form. Implementing wins iff
//   c_p/c_e < inv_logit(pi) - inv_logit(pi + total effect).
inline double critical_ratio(double pi, const EffectSummary& summary) {
  const double total = summary.total_effect();
  if (!std::isfinite(pi) || !std::isfinite(total))
    throw ValidationError("critical_ratio needs finite inputs");
  return inv_logit(pi) - inv_logit(pi + total);
}

inline DecisionCurve cost_ratio_sweep(double pi, const EffectSummary& summary,
                                      double grid_step = 0.01,
                                      double ratio_min = 0.01,
                                      double ratio_max = 1.0) {
  if (!(grid_step > 0.0)) throw ValidationError("grid_step must be > 0");
  if (!(ratio_min > 0.0) || !(ratio_max >= ratio_min))
    throw ValidationError("cost ratio range must satisfy 0 < min <= max");
  DecisionCurve curve;
  curve.grid_step = grid_step;
  const std::size_t n_steps =
      static_cast<std::size_t>(std::floor((ratio_max - ratio_min) / grid_step + 1e-9)) + 1;
  std::size_t n_wins = 0;
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double r = ratio_min + static_cast<double>(i) * grid_step;
    LossScenario s;
    s.pi = pi;
    s.summary = summary;
    s.c_p = 1.0;
    s.c_e = 1.0 / r;
    DecisionPoint pt;
    pt.ratio = r;
    pt.loss_implement = expected_loss_binary(s, true);
    pt.loss_not = expected_loss_binary(s, false);
    pt.implement = pt.loss_implement < pt.loss_not;
    if (pt.implement) {
      curve.crossover_ratio = r;
      ++n_wins;
    }
    curve.points.push_back(pt);
  }
  if (n_wins == 0 || n_wins == curve.points.size()) curve.crossover_ratio.reset();
  return curve;
}

}  // namespace bayesdec
