#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "budgetbo/acquisition.hpp"
#include "budgetbo/rng.hpp"
#include "budgetbo/surrogate.hpp"

namespace budgetbo {

struct OptimizerConfig;  // acq_optimizer.hpp

// Lookahead depth N and per-stage fantasy counts (m_1,...,m_{N-1}).
struct TreeLayout {
  int lookahead_steps = 1;
  std::vector<int> branching;

  TreeLayout() = default;
  TreeLayout(int n, std::vector<int> m) : lookahead_steps(n), branching(std::move(m)) {
    if (lookahead_steps < 1) throw std::invalid_argument("TreeLayout: N must be >= 1");
    if (static_cast<int>(branching.size()) != lookahead_steps - 1) {
      throw std::invalid_argument("TreeLayout: branching length must be N - 1");
    }
    for (int m2 : branching) {
      if (m2 < 1) throw std::invalid_argument("TreeLayout: branching factors must be positive");
    }
  }

  // Full-tree defaults: N = 4 uses (4, 2, 1), N = 2 uses (4); other depths
  // extend the same decaying pattern.
  static TreeLayout full(int n) {
    std::vector<int> m;
    int f = 4;
    for (int i = 0; i < n - 1; ++i) {
      m.push_back(f);
      f = std::max(1, f / 2);
    }
    return TreeLayout(n, std::move(m));
  }

  // Path variant: one fantasy sample per stage.
  static TreeLayout path(int n) { return TreeLayout(n, std::vector<int>(static_cast<std::size_t>(n - 1), 1)); }

  bool is_path() const {
    for (int m2 : branching) {
      if (m2 != 1) return false;
    }
    return true;
  }

  int node_count() const {
    int count = 1;
    int level = 1;
    for (int m2 : branching) {
      level *= m2;
      count += level;
    }
    return count;
  }
};

// Breadth-first node bookkeeping; children of one node are contiguous.
struct TreeTopology {
  std::vector<int> parent;                      // -1 at the root
  std::vector<std::pair<int, int>> children;    // [first, last) node ids
  std::vector<int> level;
  int count = 0;

  explicit TreeTopology(const TreeLayout& layout);
};

// One decision point per tree node, flattened root-first in BFS order.
struct TreeVariables {
  Eigen::VectorXd flat;  // node_count * dim entries in the unit box
  int dim = 0;

  Eigen::VectorXd node_point(int node) const { return flat.segment(node * dim, dim); }
};

// Per-node reparameterization base samples (the root entry is unused: node
// j's pair fantasizes the parent decision point on the edge into j).
struct BaseSampleSheet {
  std::vector<double> eps_y;
  std::vector<double> eps_lnz;

  static BaseSampleSheet draw(const TreeLayout& layout, RngStream& rng) {
    const int n = layout.node_count();
    BaseSampleSheet s;
    s.eps_y.resize(static_cast<std::size_t>(n));
    s.eps_lnz.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      s.eps_y[static_cast<std::size_t>(i)] = rng.normal();
      s.eps_lnz[static_cast<std::size_t>(i)] = rng.normal();
    }
    return s;
  }
};

enum class FantasyBudgetSource { rollout_capped, true_remaining };

struct FantasyBudget {
  double amount = 0.0;  // <= true remaining budget
  FantasyBudgetSource source = FantasyBudgetSource::rollout_capped;
};

// Monte-Carlo scenario-tree value at the supplied decision points: Q1 at the
// root plus the averaged recursive sum of Q1 at the node points under
// fantasy-conditioned models.  A node whose accumulated sampled cost exhausts
// the fantasy budget contributes 0 and its subtree is pruned.  Deterministic
// given (vars, sheet).
double evaluate_tree(const TreeVariables& vars, const TreeLayout& layout,
                     const SurrogatePair& pair, const BaseSampleSheet& sheet,
                     const FantasyBudget& budget);

// Tree value together with its exact gradient with respect to every decision
// point (budget-pruning indicators held constant within one evaluation).
std::pair<double, Eigen::VectorXd> bmsei_value_and_grad(const TreeVariables& vars,
                                                        const TreeLayout& layout,
                                                        const SurrogatePair& pair,
                                                        const BaseSampleSheet& sheet,
                                                        const FantasyBudget& budget);

// Budget scheduler: roll out n_steps of the EI-PUC-CC base policy on fantasy
// observations and return min(accumulated fantasy cost, true remaining).
FantasyBudget fantasy_budget(const SurrogatePair& pair, const BudgetState& budget, int n_steps,
                             RngStream& rng, const OptimizerConfig& rollout_config);

}  // namespace budgetbo
