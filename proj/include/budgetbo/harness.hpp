#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "budgetbo/acq_optimizer.hpp"
#include "budgetbo/problems.hpp"
#include "budgetbo/surrogate.hpp"

namespace budgetbo {

enum class AcqKind { ei, ei_puc, ei_puc_cc, bmsei, bmsei_path };

struct AcqSpec {
  AcqKind kind = AcqKind::ei;
  int lookahead = 4;
  std::vector<int> branching;  // empty -> default layout for the kind

  bool is_tree() const { return kind == AcqKind::bmsei || kind == AcqKind::bmsei_path; }
  TreeLayout layout() const;
  std::string label() const;
};

AcqKind parse_acq_kind(const std::string& name);

struct RunConfig {
  std::string problem = "dropwave";  // synthetic name or "tabular:<path>"
  AcqSpec acq;
  double budget = 30.0;
  int replications = 20;
  std::uint64_t root_seed = 0;
  std::string optimizer_preset = "desk";  // desk | paper
  OptimizerConfig optimizer = OptimizerConfig::desk();
  GpPriorConfig gp_prior;
  std::string out_dir;  // empty: no files written
  int threads = 0;      // 0: hardware concurrency
  bool timing = false;  // measure wallclock_seconds (off by default so trace
                        // files are bitwise reproducible)
};

struct TraceRow {
  int eval_index = 0;
  Eigen::VectorXd x;  // problem coordinates
  double y = 0.0;
  double z = 0.0;
  double cumulative_cost = 0.0;
  double best_value = 0.0;
  double log_regret = 0.0;  // NaN when the problem has no known maximum
  bool excluded = false;    // overran the budget; not counted in performance
  double wallclock_seconds = 0.0;
};

struct RegretTrace {
  int replication = 0;
  int design_size = 0;
  bool completed = false;
  std::string error;
  std::vector<TraceRow> rows;

  // Best observed value among rows affordable at the given budget (step
  // function of cumulative cost); NaN when no row is affordable yet.
  double best_value_at(double budget_cap) const;
};

struct AggregateRow {
  double budget = 0.0;
  double mean_log_regret = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n_reps = 0;
};

ProblemSpec resolve_problem(const RunConfig& cfg);

RegretTrace run_replication(const RunConfig& cfg, const ProblemSpec& problem,
                            int replication_index);

// Mean log-regret with a 95% confidence interval on a 100-point budget grid
// spanning [0.2 B, B], each trace interpolated as a step function.
std::vector<AggregateRow> aggregate_traces(const std::vector<RegretTrace>& traces,
                                           const RunConfig& cfg, const ProblemSpec& problem);

struct ExperimentResult {
  std::vector<RegretTrace> traces;
  std::vector<AggregateRow> aggregate;
  std::string trace_path;
  std::string aggregate_path;
};

ExperimentResult run_experiment(const RunConfig& cfg);

// Flat key-value config text mirroring the CLI flags (one `key value` pair
// per line; '#' starts a comment).
RunConfig parse_run_config(const std::string& text);
std::string serialize_run_config(const RunConfig& cfg);

std::string format_g17(double v);
double log_regret(double known_max, double best_value);  // log10, floored at 1e-8

std::string trace_csv(const std::vector<RegretTrace>& traces);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);

}  // namespace budgetbo
