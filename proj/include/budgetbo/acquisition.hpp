#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "budgetbo/gp.hpp"
#include "budgetbo/stats.hpp"

namespace budgetbo {

struct BudgetState {
  double initial_budget = 0.0;  // B > 0
  double spent = 0.0;           // s(D) >= 0
  double remaining() const { return initial_budget - spent; }
};

struct AcqEval {
  double value = 0.0;
  std::optional<Eigen::VectorXd> gradient;
};

namespace acq {

constexpr double kDegenerateSd = 1e-12;

// Classical expected improvement; degenerate posteriors collapse to (mean - incumbent)^+.
template <typename T>
T ei_formula(const T& mean, const T& sd, const T& incumbent) {
  T delta = mean - incumbent;
  if (value_of(sd) <= kDegenerateSd) {
    if (value_of(delta) > 0.0) return delta;
    return delta * 0.0;
  }
  T u = delta / sd;
  T v = delta * norm_cdf(u) + sd * norm_pdf(u);
  if (value_of(v) < 0.0) return v * 0.0;  // guard float cancellation deep in the tail
  return v;
}

// Probability that the (lognormal) evaluation cost fits in the remaining budget.
template <typename T>
T cost_fit_prob(const T& mu_lnc, const T& sd_lnc, const T& remaining) {
  if (value_of(sd_lnc) <= kDegenerateSd) {
    const double ind = (value_of(mu_lnc) <= std::log(value_of(remaining))) ? 1.0 : 0.0;
    return mu_lnc * 0.0 + ind;
  }
  T zeta = (log(remaining) - mu_lnc) / sd_lnc;
  return norm_cdf(zeta);
}

// One-step budgeted expected improvement: EI x P(cost fits), 0 once overspent.
template <typename T>
T q1_formula(const T& mean, const T& sd, const T& incumbent, const T& mu_lnc, const T& sd_lnc,
             const T& remaining) {
  if (value_of(remaining) <= 0.0) return mean * 0.0;
  return ei_formula(mean, sd, incumbent) * cost_fit_prob(mu_lnc, sd_lnc, remaining);
}

// EI per unit cost with cooling exponent nu; nu = 1 recovers EI-PUC.
template <typename T>
T ei_puc_cc_formula(const T& mean, const T& sd, const T& incumbent, const T& mu_lnc,
                    const T& sd_lnc, double nu) {
  return ei_formula(mean, sd, incumbent) * exp(-nu * mu_lnc + (0.5 * nu * nu) * (sd_lnc * sd_lnc));
}

}  // namespace acq

AcqEval ei(const PosteriorSummary& obj, double incumbent);
AcqEval q1(const PosteriorSummary& obj, const PosteriorSummary& logcost, double incumbent,
           const BudgetState& budget);
AcqEval ei_puc_cc(const PosteriorSummary& obj, const PosteriorSummary& logcost, double incumbent,
                  double nu);
double nu_schedule(const BudgetState& budget);

// Acquisition closure over a point in the unit box, with exact gradients
// obtained by evaluating the posterior and the closed form on dual numbers.
using AcqOverPoint = std::function<AcqEval(const Eigen::VectorXd&)>;

AcqOverPoint make_ei_over(const GpModel& obj, double incumbent);
AcqOverPoint make_q1_over(const GpModel& obj, const GpModel& logcost, double incumbent,
                          BudgetState budget);
AcqOverPoint make_ei_puc_cc_over(const GpModel& obj, const GpModel& logcost, double incumbent,
                                 double nu);

}  // namespace budgetbo
