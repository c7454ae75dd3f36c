#include "budgetbo/acquisition.hpp"

#include <cmath>
#include <stdexcept>

namespace budgetbo {

namespace {

void posterior_dual(const GpModel& m, const Eigen::VectorXd& x, Dual* mean, Dual* sd) {
  const int d = static_cast<int>(x.size());
  std::vector<Dual> xd;
  xd.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) xd.push_back(Dual::variable(x[i], d, i));
  FantasyChain<Dual> chain(m);
  chain.posterior(xd, mean, sd);
}

}  // namespace

AcqEval ei(const PosteriorSummary& obj, double incumbent) {
  return {acq::ei_formula(obj.mean, obj.stddev, incumbent), std::nullopt};
}

AcqEval q1(const PosteriorSummary& obj, const PosteriorSummary& logcost, double incumbent,
           const BudgetState& budget) {
  return {acq::q1_formula(obj.mean, obj.stddev, incumbent, logcost.mean, logcost.stddev,
                          budget.remaining()),
          std::nullopt};
}

AcqEval ei_puc_cc(const PosteriorSummary& obj, const PosteriorSummary& logcost, double incumbent,
                  double nu) {
  if (nu < 0.0) throw std::invalid_argument("ei_puc_cc: nu must be nonnegative");
  return {acq::ei_puc_cc_formula(obj.mean, obj.stddev, incumbent, logcost.mean, logcost.stddev, nu),
          std::nullopt};
}

double nu_schedule(const BudgetState& budget) {
  const double nu = std::max(budget.remaining(), 0.0) / budget.initial_budget;
  return std::min(nu, 1.0);
}

AcqOverPoint make_ei_over(const GpModel& obj, double incumbent) {
  return [&obj, incumbent](const Eigen::VectorXd& x) -> AcqEval {
    Dual mean, sd;
    posterior_dual(obj, x, &mean, &sd);
    const int d = static_cast<int>(x.size());
    const Dual v = acq::ei_formula(mean, sd, Dual::constant(incumbent, d));
    return {v.val, v.grad};
  };
}

AcqOverPoint make_q1_over(const GpModel& obj, const GpModel& logcost, double incumbent,
                          BudgetState budget) {
  return [&obj, &logcost, incumbent, budget](const Eigen::VectorXd& x) -> AcqEval {
    Dual mf, sf, mc, sc;
    posterior_dual(obj, x, &mf, &sf);
    posterior_dual(logcost, x, &mc, &sc);
    const int d = static_cast<int>(x.size());
    const Dual v = acq::q1_formula(mf, sf, Dual::constant(incumbent, d), mc, sc,
                                   Dual::constant(budget.remaining(), d));
    return {v.val, v.grad};
  };
}

AcqOverPoint make_ei_puc_cc_over(const GpModel& obj, const GpModel& logcost, double incumbent,
                                 double nu) {
  if (nu < 0.0) throw std::invalid_argument("ei_puc_cc: nu must be nonnegative");
  return [&obj, &logcost, incumbent, nu](const Eigen::VectorXd& x) -> AcqEval {
    Dual mf, sf, mc, sc;
    posterior_dual(obj, x, &mf, &sf);
    posterior_dual(logcost, x, &mc, &sc);
    const int d = static_cast<int>(x.size());
    const Dual v = acq::ei_puc_cc_formula(mf, sf, Dual::constant(incumbent, d), mc, sc, nu);
    return {v.val, v.grad};
  };
}

}  // namespace budgetbo
