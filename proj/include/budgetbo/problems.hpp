#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "budgetbo/rng.hpp"

namespace budgetbo {

// A box-constrained maximization problem with a strictly positive cost
// oracle.  known_max / known_argmax feed regret reporting when available.
struct ProblemSpec {
  std::string name;
  int dim = 0;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::function<double(const Eigen::VectorXd&)> objective;
  std::function<double(const Eigen::VectorXd&)> cost;
  std::optional<double> known_max;
  std::optional<Eigen::VectorXd> known_argmax;
  double noise_stddev = 0.0;
};

enum class SyntheticName { dropwave, alpine1, ackley, shekel5 };

ProblemSpec make_synthetic(SyntheticName name);
ProblemSpec make_synthetic(const std::string& name);  // throws on unknown name
std::vector<std::string> synthetic_names();

// Periodic cost family c(x) = exp[(alpha/d) sum_i cos(beta (x_i - x*_i + gamma))],
// anchored at the objective maximizer.
struct CostFamilyParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.0;
  Eigen::VectorXd anchor;
};

CostFamilyParams sample_cost_params(SyntheticName name, RngStream& rng);
CostFamilyParams sample_cost_params(const ProblemSpec& spec, RngStream& rng);
double eval_cost(const CostFamilyParams& params, const Eigen::VectorXd& x);

// Returns a copy of the problem with its cost oracle replaced by the family.
ProblemSpec with_cost_family(ProblemSpec spec, CostFamilyParams params);

// Discrete Bayesian instances behind the unbounded-approximation-ratio
// counterexamples: K low points plus one high point over independent normal
// priors with zero means and known costs, budget 1 + delta, and a free
// initial observation f(0) = 0.
enum class Theorem1Variant { for_eipuc, for_ei };

struct DiscreteInstance {
  Theorem1Variant variant = Theorem1Variant::for_eipuc;
  double epsilon = 0.0;
  double delta = 0.0;
  int k_low = 0;         // K = ceil((1 + delta) / epsilon)
  double budget = 0.0;   // 1 + delta
  double low_sd = 0.0;   // epsilon or (1 - epsilon) depending on the variant
  double low_cost = 0.0;
  double high_sd = 1.0;
  double high_cost = 0.0;

  int num_points() const { return k_low + 1; }  // selectable points 1..K+1
  double point_sd(int idx) const { return idx <= k_low ? low_sd : high_sd; }
  double point_cost(int idx) const { return idx <= k_low ? low_cost : high_cost; }
};

DiscreteInstance make_theorem1_instance(double epsilon, double delta, Theorem1Variant variant);

// Grid-tabulated problem: header `dims k sizes n1 .. nk bounds l1 u1 .. lk uk`
// followed by one `y z` line per vertex in row-major order; objective and cost
// are interpolated piecewise-multilinearly.
ProblemSpec load_tabular(const std::string& path);

}  // namespace budgetbo
