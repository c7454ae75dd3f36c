#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "budgetbo/acquisition.hpp"
#include "budgetbo/multistep_tree.hpp"

namespace budgetbo {

struct OptimizerConfig {
  int raw_candidates_per_dim = 64;
  int starts_per_dim = 4;
  int max_local_iters = 100;
  double convergence_tol = 1e-6;
  int total_starts_override = 0;  // when > 0, run exactly this many starts

  static OptimizerConfig desk() { return {}; }
  static OptimizerConfig paper() { return {200, 10, 200, 1e-8, 0}; }
};

struct ScalarMaxResult {
  Eigen::VectorXd x;
  double value = 0.0;
};

// Multistart maximization of an acquisition over the unit box: Sobol raw
// candidates, top-k start selection with duplicate-distance filtering, then
// box-constrained quasi-Newton ascent from each start.  Deterministic given
// the seed; never returns less than the best raw candidate.
ScalarMaxResult maximize_scalar_acq(const AcqOverPoint& acq, int dim, const OptimizerConfig& cfg,
                                    std::uint64_t seed);

// Previous iteration's optimized tree, used to warm-start the next one: the
// branch whose root fantasy sample is closest to the actually observed value
// seeds the first levels of the new tree.
struct WarmStartCache {
  bool valid = false;
  TreeLayout layout;
  TreeVariables vars;
  std::vector<double> root_branch_y;
  double observed_y = 0.0;
  bool observed_set = false;
};

struct TreeMaxResult {
  TreeVariables vars;
  double value = 0.0;
};

// Joint one-shot optimization of all scenario-tree decision points.
TreeMaxResult maximize_tree(const TreeLayout& layout, const SurrogatePair& pair,
                            const BaseSampleSheet& sheet, const FantasyBudget& budget,
                            const OptimizerConfig& cfg, std::uint64_t seed,
                            const WarmStartCache* warm = nullptr);

}  // namespace budgetbo
