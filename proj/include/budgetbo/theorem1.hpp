#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "budgetbo/problems.hpp"

namespace budgetbo {

enum class DiscretePolicy { ei, ei_puc, high_once, low_only };

const char* policy_name(DiscretePolicy p);

struct PolicyValueEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_trajectories = 0;
};

// Per-trajectory facts asserted by the counterexample analysis.
struct SimulationAudit {
  long first_pick_high = 0;   // trajectories whose first measurement is the high point
  long high_measured = 0;     // trajectories that ever measure the high point
  long min_steps = 0;
  long max_steps = 0;
  bool utility_monotone = true;
  bool budget_respected = true;  // total cost <= budget at the reported stopping state
};

// Monte-Carlo rollout of a policy on a discrete instance with exact
// independent-normal beliefs (no observation noise: measured points are known
// and their expected improvement is zero).  Trajectories stop when no
// affordable unmeasured point remains.
PolicyValueEstimate simulate(const DiscreteInstance& instance, DiscretePolicy policy,
                             long n_trajectories, std::uint64_t seed,
                             SimulationAudit* audit = nullptr);

struct RatioRow {
  double epsilon = 0.0;
  double delta = 0.0;
  std::string variant;
  std::string policy;
  double mean = 0.0;
  double std_error = 0.0;
  double ratio = 1.0;     // reference-policy value / this policy's value
  double ratio_se = 0.0;  // delta-method standard error of the ratio
};

// For each epsilon: high_once vs EI-PUC on the for_eipuc instance and
// low_only vs EI on the for_ei instance.
std::vector<RatioRow> ratio_report(const std::vector<double>& epsilons, double delta,
                                   long n_trajectories, std::uint64_t seed);

std::string ratio_report_csv(const std::vector<RatioRow>& rows);

}  // namespace budgetbo
