#include "budgetbo/multistep_tree.hpp"

#include <cmath>

#include "budgetbo/acq_optimizer.hpp"

namespace budgetbo {

TreeTopology::TreeTopology(const TreeLayout& layout) {
  count = layout.node_count();
  parent.assign(static_cast<std::size_t>(count), -1);
  children.assign(static_cast<std::size_t>(count), {0, 0});
  level.assign(static_cast<std::size_t>(count), 0);

  int first_of_level = 0;
  int level_size = 1;
  int next = 1;
  for (std::size_t stage = 0; stage < layout.branching.size(); ++stage) {
    const int m = layout.branching[stage];
    for (int i = 0; i < level_size; ++i) {
      const int node = first_of_level + i;
      children[static_cast<std::size_t>(node)] = {next, next + m};
      for (int c = next; c < next + m; ++c) {
        parent[static_cast<std::size_t>(c)] = node;
        level[static_cast<std::size_t>(c)] = static_cast<int>(stage) + 1;
      }
      next += m;
    }
    first_of_level += level_size;
    level_size *= m;
  }
}

namespace {

template <typename T>
struct TreeEval {
  const TreeTopology& topo;
  const BaseSampleSheet& sheet;
  const std::vector<std::vector<T>>& points;
  FantasyChain<T> obj;
  FantasyChain<T> cost;

  TreeEval(const TreeTopology& t, const BaseSampleSheet& s,
           const std::vector<std::vector<T>>& p, const SurrogatePair& pair)
      : topo(t), sheet(s), points(p), obj(pair.objective_model), cost(pair.logcost_model) {}

  T node_value(int node, const T& remaining, const T& incumbent) {
    const std::vector<T>& x = points[static_cast<std::size_t>(node)];
    T mf, sf, mc, sc;
    obj.posterior(x, &mf, &sf);
    cost.posterior(x, &mc, &sc);

    T val = acq::q1_formula(mf, sf, incumbent, mc, sc, remaining);

    const auto [first, last] = topo.children[static_cast<std::size_t>(node)];
    if (first == last) return val;

    T acc = val * 0.0;
    for (int child = first; child < last; ++child) {
      const T y = mf + sf * sheet.eps_y[static_cast<std::size_t>(child)];
      const T lnz = mc + sc * sheet.eps_lnz[static_cast<std::size_t>(child)];
      const T rem_child = remaining - exp(lnz);
      if (value_of(rem_child) > 0.0) {  // else: budget exhausted, subtree pruned
        obj.push(x, y);
        cost.push(x, lnz);
        acc += node_value(child, rem_child, max(incumbent, y));
        obj.pop();
        cost.pop();
      }
    }
    val += acc / static_cast<double>(last - first);
    return val;
  }
};

void check_shapes(const TreeVariables& vars, const TreeLayout& layout, const SurrogatePair& pair,
                  const BaseSampleSheet& sheet) {
  const int count = layout.node_count();
  const int d = pair.objective_model.dim();
  if (vars.dim != d || vars.flat.size() != static_cast<Eigen::Index>(count) * d) {
    throw std::invalid_argument("evaluate_tree: variables do not match layout/model dimensions");
  }
  if (static_cast<int>(sheet.eps_y.size()) != count ||
      static_cast<int>(sheet.eps_lnz.size()) != count) {
    throw std::invalid_argument("evaluate_tree: base sample sheet does not match layout");
  }
}

}  // namespace

double evaluate_tree(const TreeVariables& vars, const TreeLayout& layout,
                     const SurrogatePair& pair, const BaseSampleSheet& sheet,
                     const FantasyBudget& budget) {
  check_shapes(vars, layout, pair, sheet);
  const TreeTopology topo(layout);
  const int d = vars.dim;

  std::vector<std::vector<double>> points(static_cast<std::size_t>(topo.count));
  for (int node = 0; node < topo.count; ++node) {
    auto& p = points[static_cast<std::size_t>(node)];
    p.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) p[static_cast<std::size_t>(i)] = vars.flat[node * d + i];
  }

  TreeEval<double> eval(topo, sheet, points, pair);
  return eval.node_value(0, budget.amount, pair.dataset.utility());
}

std::pair<double, Eigen::VectorXd> bmsei_value_and_grad(const TreeVariables& vars,
                                                        const TreeLayout& layout,
                                                        const SurrogatePair& pair,
                                                        const BaseSampleSheet& sheet,
                                                        const FantasyBudget& budget) {
  check_shapes(vars, layout, pair, sheet);
  const TreeTopology topo(layout);
  const int d = vars.dim;
  const int nvars = topo.count * d;

  std::vector<std::vector<Dual>> points(static_cast<std::size_t>(topo.count));
  for (int node = 0; node < topo.count; ++node) {
    auto& p = points[static_cast<std::size_t>(node)];
    p.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      p.push_back(Dual::variable(vars.flat[node * d + i], nvars, node * d + i));
    }
  }

  TreeEval<Dual> eval(topo, sheet, points, pair);
  const Dual v = eval.node_value(0, Dual::constant(budget.amount, nvars),
                                 Dual::constant(pair.dataset.utility(), nvars));
  return {v.val, v.grad};
}

FantasyBudget fantasy_budget(const SurrogatePair& pair, const BudgetState& budget, int n_steps,
                             RngStream& rng, const OptimizerConfig& rollout_config) {
  if (n_steps < 1) throw std::invalid_argument("fantasy_budget: n_steps must be >= 1");
  const double remaining = budget.remaining();
  if (!(remaining > 0.0)) throw std::invalid_argument("fantasy_budget: no remaining budget");

  OptimizerConfig cfg = rollout_config;
  cfg.total_starts_override = 4;  // base-policy rollout runs at reduced restart count

  SurrogatePair cur = pair;
  double incumbent = pair.dataset.utility();
  double fantasy_spent = budget.spent;
  double total = 0.0;
  const int d = pair.objective_model.dim();

  for (int step = 0; step < n_steps; ++step) {
    const BudgetState state{budget.initial_budget, fantasy_spent};
    const double nu = nu_schedule(state);
    const auto acqf = make_ei_puc_cc_over(cur.objective_model, cur.logcost_model, incumbent, nu);
    const ScalarMaxResult best = maximize_scalar_acq(acqf, d, cfg, rng.next_u64());

    FantasyResult f = fantasize(cur, best.x, rng.normal(), rng.normal());
    total += f.z_sample;
    fantasy_spent += f.z_sample;
    incumbent = std::max(incumbent, f.y_sample);
    cur = std::move(f.pair);
  }

  if (total <= remaining) return {total, FantasyBudgetSource::rollout_capped};
  return {remaining, FantasyBudgetSource::true_remaining};
}

}  // namespace budgetbo
