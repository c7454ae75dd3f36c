#include "budgetbo/acq_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "budgetbo/bfgs.hpp"
#include "budgetbo/rng.hpp"
#include "budgetbo/sobol.hpp"

namespace budgetbo {

namespace {

constexpr double kMinStartDistance = 0.01;

std::vector<int> select_starts(const Eigen::MatrixXd& cands, const std::vector<double>& values,
                               int want) {
  const int n = static_cast<int>(cands.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)]; });

  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(want));
  for (int idx : order) {
    if (static_cast<int>(picked.size()) >= want) break;
    bool dup = false;
    for (int p : picked) {
      if ((cands.row(idx) - cands.row(p)).norm() < kMinStartDistance) {
        dup = true;
        break;
      }
    }
    if (!dup) picked.push_back(idx);
  }
  for (int idx : order) {  // top up if the distance filter ran out of candidates
    if (static_cast<int>(picked.size()) >= want) break;
    if (std::find(picked.begin(), picked.end(), idx) == picked.end()) picked.push_back(idx);
  }
  return picked;
}

ScalarMaxResult maximize_over_box(const BoxObjective& objective,
                                  const std::function<double(const Eigen::VectorXd&)>& value_only,
                                  int dim, const OptimizerConfig& cfg, std::uint64_t seed,
                                  const std::vector<Eigen::VectorXd>& extra_candidates) {
  const int n_raw = std::max(1, cfg.raw_candidates_per_dim * dim);
  SobolSequence sobol(dim, derive_seed(seed, {0x616371726177ULL}));
  const int n_total = n_raw + static_cast<int>(extra_candidates.size());
  Eigen::MatrixXd cands(n_total, dim);
  for (int i = 0; i < n_raw; ++i) cands.row(i) = sobol.next().transpose();
  for (std::size_t e = 0; e < extra_candidates.size(); ++e) {
    cands.row(n_raw + static_cast<int>(e)) = extra_candidates[e].transpose();
  }

  std::vector<double> values(static_cast<std::size_t>(n_total));
  int best_idx = 0;
  for (int i = 0; i < n_total; ++i) {
    values[static_cast<std::size_t>(i)] = value_only(cands.row(i).transpose());
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best_idx)]) best_idx = i;
  }

  ScalarMaxResult best{cands.row(best_idx).transpose(), values[static_cast<std::size_t>(best_idx)]};

  int want = cfg.total_starts_override > 0 ? cfg.total_starts_override
                                           : std::max(1, cfg.starts_per_dim * dim);
  want = std::min(want, n_total);
  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(dim);
  const Eigen::VectorXd hi = Eigen::VectorXd::Ones(dim);
  for (int idx : select_starts(cands, values, want)) {
    const BoxAscentResult r = ascend_box(objective, cands.row(idx).transpose(), lo, hi,
                                         cfg.max_local_iters, cfg.convergence_tol);
    if (r.value > best.value) {
      best.value = r.value;
      best.x = r.x;
    }
  }
  for (int i = 0; i < dim; ++i) best.x[i] = std::min(std::max(best.x[i], 0.0), 1.0);
  return best;
}

}  // namespace

ScalarMaxResult maximize_scalar_acq(const AcqOverPoint& acq, int dim, const OptimizerConfig& cfg,
                                    std::uint64_t seed) {
  const auto value_only = [&acq](const Eigen::VectorXd& x) { return acq(x).value; };
  const BoxObjective objective = [&acq](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const AcqEval e = acq(x);
    if (grad != nullptr) {
      if (e.gradient.has_value()) {
        *grad = *e.gradient;
      } else {
        grad->resize(x.size());
        Eigen::VectorXd xp = x;
        constexpr double step = 1e-6;
        for (int i = 0; i < x.size(); ++i) {
          const double saved = xp[i];
          xp[i] = saved + step;
          const double fp = acq(xp).value;
          xp[i] = saved - step;
          const double fm = acq(xp).value;
          xp[i] = saved;
          (*grad)[i] = (fp - fm) / (2.0 * step);
        }
      }
    }
    return e.value;
  };
  return maximize_over_box(objective, value_only, dim, cfg, seed, {});
}

namespace {

// Maps the previous solution's subtree under the matched root branch onto the
// first levels of the new tree; unmatched nodes keep their Sobol fill.
void map_warm_subtree(const TreeTopology& new_topo, const TreeTopology& old_topo,
                      const TreeVariables& old_vars, int d, int new_node, int old_node,
                      Eigen::VectorXd* flat) {
  flat->segment(new_node * d, d) = old_vars.node_point(old_node);
  const auto [nf, nl] = new_topo.children[static_cast<std::size_t>(new_node)];
  const auto [of, ol] = old_topo.children[static_cast<std::size_t>(old_node)];
  for (int k = 0; k < nl - nf && k < ol - of; ++k) {
    map_warm_subtree(new_topo, old_topo, old_vars, d, nf + k, of + k, flat);
  }
}

std::optional<Eigen::VectorXd> warm_candidate(const TreeLayout& layout, int d,
                                              const WarmStartCache* warm,
                                              std::uint64_t seed) {
  if (warm == nullptr || !warm->valid || !warm->observed_set || warm->vars.dim != d ||
      warm->root_branch_y.empty()) {
    return std::nullopt;
  }
  const TreeTopology old_topo(warm->layout);
  const auto [rf, rl] = old_topo.children[0];
  if (rl - rf != static_cast<int>(warm->root_branch_y.size())) return std::nullopt;

  int j_star = 0;
  for (int j = 1; j < static_cast<int>(warm->root_branch_y.size()); ++j) {
    if (std::abs(warm->root_branch_y[static_cast<std::size_t>(j)] - warm->observed_y) <
        std::abs(warm->root_branch_y[static_cast<std::size_t>(j_star)] - warm->observed_y)) {
      j_star = j;
    }
  }

  const TreeTopology new_topo(layout);
  SobolSequence fill(new_topo.count * d, derive_seed(seed, {0x7761726dULL}));
  Eigen::VectorXd flat = fill.next();
  map_warm_subtree(new_topo, old_topo, warm->vars, d, 0, rf + j_star, &flat);
  return flat;
}

}  // namespace

TreeMaxResult maximize_tree(const TreeLayout& layout, const SurrogatePair& pair,
                            const BaseSampleSheet& sheet, const FantasyBudget& budget,
                            const OptimizerConfig& cfg, std::uint64_t seed,
                            const WarmStartCache* warm) {
  const int d = pair.objective_model.dim();

  const auto value_only = [&](const Eigen::VectorXd& flat) {
    return evaluate_tree(TreeVariables{flat, d}, layout, pair, sheet, budget);
  };
  const BoxObjective objective = [&](const Eigen::VectorXd& flat, Eigen::VectorXd* grad) {
    if (grad == nullptr) return value_only(flat);
    auto [v, g] = bmsei_value_and_grad(TreeVariables{flat, d}, layout, pair, sheet, budget);
    *grad = std::move(g);
    return v;
  };

  std::vector<Eigen::VectorXd> extras;
  if (auto w = warm_candidate(layout, d, warm, seed)) extras.push_back(std::move(*w));

  const int flat_dim = layout.node_count() * d;
  const ScalarMaxResult r = maximize_over_box(objective, value_only, flat_dim, cfg, seed, extras);
  return TreeMaxResult{TreeVariables{r.x, d}, r.value};
}

}  // namespace budgetbo
