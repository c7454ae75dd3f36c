#include "budgetbo/theorem1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "budgetbo/acquisition.hpp"
#include "budgetbo/rng.hpp"

namespace budgetbo {

const char* policy_name(DiscretePolicy p) {
  switch (p) {
    case DiscretePolicy::ei:
      return "ei";
    case DiscretePolicy::ei_puc:
      return "ei_puc";
    case DiscretePolicy::high_once:
      return "high_once";
    case DiscretePolicy::low_only:
      return "low_only";
  }
  return "?";
}

namespace {

// One trajectory.  Low points are exchangeable, so beliefs reduce to the
// number of measured low points plus the high-point flag; acquisition scores
// need one EI evaluation per point class and ties resolve to the lowest
// index, i.e. a low point.
double run_trajectory(const DiscreteInstance& inst, DiscretePolicy policy, RngStream& rng,
                      bool* picked_high_first, bool* picked_high_ever, long* steps,
                      bool* utility_monotone, bool* budget_respected) {
  int lows_measured = 0;
  bool high_measured = false;
  double utility = 0.0;  // initial observation f(0) = 0
  double spent = 0.0;
  *picked_high_first = false;
  *picked_high_ever = false;
  *steps = 0;

  for (;;) {
    const double remaining = inst.budget - spent;
    const bool low_ok = lows_measured < inst.k_low && inst.low_cost <= remaining + 1e-12;
    const bool high_ok = !high_measured && inst.high_cost <= remaining + 1e-12;
    if (!low_ok && !high_ok) break;

    bool pick_high = false;
    switch (policy) {
      case DiscretePolicy::ei: {
        const double ei_low = low_ok ? acq::ei_formula(0.0, inst.low_sd, utility)
                                     : -std::numeric_limits<double>::infinity();
        const double ei_high = high_ok ? acq::ei_formula(0.0, inst.high_sd, utility)
                                       : -std::numeric_limits<double>::infinity();
        pick_high = ei_high > ei_low;  // tie -> lowest index, which is a low point
        break;
      }
      case DiscretePolicy::ei_puc: {
        const double s_low = low_ok ? acq::ei_formula(0.0, inst.low_sd, utility) / inst.low_cost
                                    : -std::numeric_limits<double>::infinity();
        const double s_high = high_ok
                                  ? acq::ei_formula(0.0, inst.high_sd, utility) / inst.high_cost
                                  : -std::numeric_limits<double>::infinity();
        pick_high = s_high > s_low;
        break;
      }
      case DiscretePolicy::high_once:
        if (!high_ok || high_measured) return utility;
        pick_high = true;
        break;
      case DiscretePolicy::low_only:
        if (!low_ok) return utility;
        pick_high = false;
        break;
    }

    const double sd = pick_high ? inst.high_sd : inst.low_sd;
    const double cost = pick_high ? inst.high_cost : inst.low_cost;
    const double y = sd * rng.normal();

    ++*steps;
    if (*steps == 1 && pick_high) *picked_high_first = true;
    if (pick_high) {
      *picked_high_ever = true;
      high_measured = true;
    } else {
      ++lows_measured;
    }
    const double new_utility = std::max(utility, y);
    if (new_utility < utility) *utility_monotone = false;
    utility = new_utility;
    spent += cost;
    if (spent > inst.budget + 1e-9) *budget_respected = false;

    if (policy == DiscretePolicy::high_once) break;
  }
  return utility;
}

}  // namespace

PolicyValueEstimate simulate(const DiscreteInstance& instance, DiscretePolicy policy,
                             long n_trajectories, std::uint64_t seed, SimulationAudit* audit) {
  if (n_trajectories < 1) throw std::invalid_argument("simulate: n_trajectories must be >= 1");

  double sum = 0.0;
  double sum_sq = 0.0;
  SimulationAudit local;
  local.min_steps = std::numeric_limits<long>::max();
  for (long t = 0; t < n_trajectories; ++t) {
    RngStream rng(derive_seed(seed, {0x7468656f72656dULL, static_cast<std::uint64_t>(t)}));
    bool first = false;
    bool ever = false;
    long steps = 0;
    const double v = run_trajectory(instance, policy, rng, &first, &ever, &steps,
                                    &local.utility_monotone, &local.budget_respected);
    sum += v;
    sum_sq += v * v;
    local.first_pick_high += first ? 1 : 0;
    local.high_measured += ever ? 1 : 0;
    local.min_steps = std::min(local.min_steps, steps);
    local.max_steps = std::max(local.max_steps, steps);
  }

  PolicyValueEstimate est;
  est.n_trajectories = n_trajectories;
  est.mean = sum / static_cast<double>(n_trajectories);
  const double var =
      std::max(0.0, (sum_sq - sum * sum / static_cast<double>(n_trajectories)) /
                        std::max<long>(1, n_trajectories - 1));
  est.std_error = std::sqrt(var / static_cast<double>(n_trajectories));
  if (audit != nullptr) *audit = local;
  return est;
}

namespace {

RatioRow make_row(const DiscreteInstance& inst, const char* variant, DiscretePolicy policy,
                  const PolicyValueEstimate& est, const PolicyValueEstimate& ref) {
  RatioRow r;
  r.epsilon = inst.epsilon;
  r.delta = inst.delta;
  r.variant = variant;
  r.policy = policy_name(policy);
  r.mean = est.mean;
  r.std_error = est.std_error;
  r.ratio = ref.mean / est.mean;
  // delta-method standard error of a ratio of independent estimates
  const double rel = std::sqrt((ref.std_error * ref.std_error) / (ref.mean * ref.mean) +
                               (est.std_error * est.std_error) / (est.mean * est.mean));
  r.ratio_se = std::abs(r.ratio) * rel;
  return r;
}

}  // namespace

std::vector<RatioRow> ratio_report(const std::vector<double>& epsilons, double delta,
                                   long n_trajectories, std::uint64_t seed) {
  std::vector<RatioRow> rows;
  for (double eps : epsilons) {
    {
      const DiscreteInstance inst = make_theorem1_instance(eps, delta, Theorem1Variant::for_eipuc);
      const auto ref = simulate(inst, DiscretePolicy::high_once, n_trajectories,
                                derive_seed(seed, {1, static_cast<std::uint64_t>(rows.size())}));
      const auto pol = simulate(inst, DiscretePolicy::ei_puc, n_trajectories,
                                derive_seed(seed, {2, static_cast<std::uint64_t>(rows.size())}));
      rows.push_back(make_row(inst, "for_eipuc", DiscretePolicy::high_once, ref, ref));
      rows.push_back(make_row(inst, "for_eipuc", DiscretePolicy::ei_puc, pol, ref));
    }
    {
      const DiscreteInstance inst = make_theorem1_instance(eps, delta, Theorem1Variant::for_ei);
      const auto ref = simulate(inst, DiscretePolicy::low_only, n_trajectories,
                                derive_seed(seed, {3, static_cast<std::uint64_t>(rows.size())}));
      const auto pol = simulate(inst, DiscretePolicy::ei, n_trajectories,
                                derive_seed(seed, {4, static_cast<std::uint64_t>(rows.size())}));
      rows.push_back(make_row(inst, "for_ei", DiscretePolicy::low_only, ref, ref));
      rows.push_back(make_row(inst, "for_ei", DiscretePolicy::ei, pol, ref));
    }
  }
  return rows;
}

std::string ratio_report_csv(const std::vector<RatioRow>& rows) {
  std::ostringstream out;
  out << "epsilon,delta,variant,policy,mean,std_error,ratio\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s,%s,%.17g,%.17g,%.17g\n", r.epsilon, r.delta,
                  r.variant.c_str(), r.policy.c_str(), r.mean, r.std_error, r.ratio);
    out << buf;
  }
  return out.str();
}

}  // namespace budgetbo
