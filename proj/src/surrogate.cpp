#include "budgetbo/surrogate.hpp"

#include <cmath>

#include "budgetbo/rng.hpp"

namespace budgetbo {

SurrogatePair refit(const Dataset& dataset, const GpPriorConfig& prior) {
  if (dataset.size() < 2) throw std::invalid_argument("refit: at least 2 observations required");

  GpPriorConfig obj_cfg = prior;  // standardize_targets as configured
  GpPriorConfig cost_cfg = prior;
  cost_cfg.standardize_targets = false;  // log-cost targets modeled raw
  cost_cfg.seed = derive_seed(prior.seed, {0x6c6f67636f7374ULL});

  const Eigen::MatrixXd x = dataset.inputs();
  return SurrogatePair{fit_map(x, dataset.objectives(), obj_cfg),
                       fit_map(x, dataset.log_costs(), cost_cfg), dataset};
}

FantasyResult fantasize(const SurrogatePair& pair, const Eigen::VectorXd& x, double eps_y,
                        double eps_lnz) {
  const PosteriorSummary obj = pair.objective_model.posterior(x);
  const PosteriorSummary lnc = pair.logcost_model.posterior(x);
  const double y = sample_reparam(obj, eps_y);
  const double lnz = sample_reparam(lnc, eps_lnz);
  const double z = std::exp(lnz);

  FantasyResult out{SurrogatePair{pair.objective_model.condition(x, y),
                                  pair.logcost_model.condition(x, lnz), pair.dataset},
                    y, z};
  out.pair.dataset.append(Observation{x, y, z});
  return out;
}

}  // namespace budgetbo
