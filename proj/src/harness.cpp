#include "budgetbo/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "budgetbo/acquisition.hpp"
#include "budgetbo/multistep_tree.hpp"
#include "budgetbo/rng.hpp"
#include "budgetbo/sobol.hpp"

namespace budgetbo {

namespace {

constexpr std::uint64_t kTagRep = 0x726570ULL;
constexpr std::uint64_t kTagCost = 0x636f7374ULL;
constexpr std::uint64_t kTagDesign = 0x64657369676eULL;
constexpr std::uint64_t kTagNoise = 0x6e6f697365ULL;
constexpr std::uint64_t kTagSheet = 0x7368656574ULL;
constexpr std::uint64_t kTagSched = 0x7363686564ULL;
constexpr std::uint64_t kTagFit = 0x666974ULL;
constexpr std::uint64_t kTagOpt = 0x6f7074ULL;

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

bool is_tabular(const std::string& problem) { return problem.rfind("tabular:", 0) == 0; }

}  // namespace

TreeLayout AcqSpec::layout() const {
  const int n = lookahead;
  if (kind == AcqKind::bmsei_path) return TreeLayout::path(n);
  if (!branching.empty()) return TreeLayout(n, branching);
  return TreeLayout::full(n);
}

std::string AcqSpec::label() const {
  switch (kind) {
    case AcqKind::ei:
      return "ei";
    case AcqKind::ei_puc:
      return "ei_puc";
    case AcqKind::ei_puc_cc:
      return "ei_puc_cc";
    case AcqKind::bmsei:
      return "bmsei" + std::to_string(lookahead);
    case AcqKind::bmsei_path:
      return "bmsei_path" + std::to_string(lookahead);
  }
  return "?";
}

AcqKind parse_acq_kind(const std::string& name) {
  if (name == "ei") return AcqKind::ei;
  if (name == "ei_puc") return AcqKind::ei_puc;
  if (name == "ei_puc_cc") return AcqKind::ei_puc_cc;
  if (name == "bmsei") return AcqKind::bmsei;
  if (name == "bmsei_path") return AcqKind::bmsei_path;
  throw std::invalid_argument("unknown acquisition: " + name);
}

double RegretTrace::best_value_at(double budget_cap) const {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : rows) {
    if (row.cumulative_cost > budget_cap || row.excluded) continue;
    if (std::isnan(best) || row.y > best) best = row.y;
  }
  return best;
}

ProblemSpec resolve_problem(const RunConfig& cfg) {
  if (is_tabular(cfg.problem)) return load_tabular(cfg.problem.substr(8));
  return make_synthetic(cfg.problem);
}

double log_regret(double known_max, double best_value) {
  return std::log10(std::max(known_max - best_value, 1e-8));
}

RegretTrace run_replication(const RunConfig& cfg, const ProblemSpec& base_problem,
                            int replication_index) {
  RegretTrace trace;
  trace.replication = replication_index;

  const std::uint64_t rep_seed =
      derive_seed(cfg.root_seed, {kTagRep, static_cast<std::uint64_t>(replication_index)});

  ProblemSpec problem = base_problem;
  if (!is_tabular(cfg.problem)) {
    RngStream cost_rng(derive_seed(rep_seed, {kTagCost}));
    problem = with_cost_family(std::move(problem), sample_cost_params(problem, cost_rng));
  }

  const int d = problem.dim;
  const double budget = cfg.budget;
  const Eigen::VectorXd span = problem.upper - problem.lower;

  RngStream noise_rng(derive_seed(rep_seed, {kTagNoise}));
  Dataset data;  // unit-box coordinates; trace rows keep problem coordinates
  double cum = 0.0;
  double best = -std::numeric_limits<double>::infinity();

  // Returns false once the budget is exhausted (or overrun) by this evaluation.
  const auto evaluate_at = [&](const Eigen::VectorXd& u, double acq_seconds) {
    const Eigen::VectorXd x = problem.lower + span.cwiseProduct(u);
    const double t0 = cfg.timing ? now_seconds() : 0.0;
    double y = problem.objective(x);
    const double z = problem.cost(x);
    if (problem.noise_stddev > 0.0) y += problem.noise_stddev * noise_rng.normal();
    cum += z;
    best = std::max(best, y);

    TraceRow row;
    row.eval_index = static_cast<int>(trace.rows.size());
    row.x = x;
    row.y = y;
    row.z = z;
    row.cumulative_cost = cum;
    row.best_value = best;
    row.log_regret = problem.known_max.has_value()
                         ? log_regret(*problem.known_max, best)
                         : std::numeric_limits<double>::quiet_NaN();
    row.excluded = cum > budget;
    row.wallclock_seconds = cfg.timing ? acq_seconds + (now_seconds() - t0) : 0.0;
    data.append(Observation{u, y, z});
    trace.rows.push_back(std::move(row));
    return cum < budget;
  };

  // Initial quasi-random design; its costs count against the budget.
  trace.design_size = 2 * (d + 1);
  SobolSequence design(d, derive_seed(rep_seed, {kTagDesign}));
  for (int i = 0; i < trace.design_size; ++i) {
    if (!evaluate_at(design.next(), 0.0)) {
      trace.completed = true;  // trace ends inside the initial design
      return trace;
    }
  }

  const bool tree_acq = cfg.acq.is_tree();
  const TreeLayout layout = tree_acq ? cfg.acq.layout() : TreeLayout();
  WarmStartCache warm;
  RngStream sheet_rng(derive_seed(rep_seed, {kTagSheet}));
  RngStream sched_rng(derive_seed(rep_seed, {kTagSched}));

  for (int t = 0; cum < budget; ++t) {
    const double t0 = cfg.timing ? now_seconds() : 0.0;

    GpPriorConfig prior = cfg.gp_prior;
    prior.seed = derive_seed(rep_seed, {kTagFit, static_cast<std::uint64_t>(t)});
    SurrogatePair pair = [&] {
      try {
        return refit(data, prior);
      } catch (const GpFitError&) {
        GpPriorConfig retry = prior;  // escalated jitter floor, then give up
        retry.noise_floor = std::min(prior.noise_floor * 100.0, 1e-2);
        return refit(data, retry);
      }
    }();

    const double incumbent = data.utility();
    const BudgetState real{budget, cum};
    const std::uint64_t opt_seed = derive_seed(rep_seed, {kTagOpt, static_cast<std::uint64_t>(t)});

    Eigen::VectorXd next_u;
    BaseSampleSheet sheet;
    if (!tree_acq) {
      AcqOverPoint acq;
      switch (cfg.acq.kind) {
        case AcqKind::ei:
          acq = make_ei_over(pair.objective_model, incumbent);
          break;
        case AcqKind::ei_puc:
          acq = make_ei_puc_cc_over(pair.objective_model, pair.logcost_model, incumbent, 1.0);
          break;
        default:
          acq = make_ei_puc_cc_over(pair.objective_model, pair.logcost_model, incumbent,
                                    nu_schedule(real));
          break;
      }
      next_u = maximize_scalar_acq(acq, d, cfg.optimizer, opt_seed).x;
    } else {
      // re-plan the N-step fantasy window from the current posterior each
      // iteration: real spending depletes an N-step window within one to a
      // few evaluations, and a stub window cannot fund the tree's horizon
      const FantasyBudget fb =
          fantasy_budget(pair, real, layout.lookahead_steps, sched_rng, cfg.optimizer);
      sheet = BaseSampleSheet::draw(layout, sheet_rng);
      const TreeMaxResult res =
          maximize_tree(layout, pair, sheet, fb, cfg.optimizer, opt_seed, &warm);
      next_u = res.vars.node_point(0);

      warm.valid = true;
      warm.layout = layout;
      warm.vars = res.vars;
      warm.observed_set = false;
      warm.root_branch_y.clear();
      const TreeTopology topo(layout);
      const auto [first, last] = topo.children[0];
      const PosteriorSummary root_post = pair.objective_model.posterior(next_u);
      for (int c = first; c < last; ++c) {
        warm.root_branch_y.push_back(
            sample_reparam(root_post, sheet.eps_y[static_cast<std::size_t>(c)]));
      }
    }

    const double acq_seconds = cfg.timing ? now_seconds() - t0 : 0.0;
    const bool more = evaluate_at(next_u, acq_seconds);
    if (tree_acq) {
      warm.observed_y = data.observations().back().y;
      warm.observed_set = true;
    }
    if (!more) break;
  }

  trace.completed = true;
  return trace;
}

std::vector<AggregateRow> aggregate_traces(const std::vector<RegretTrace>& traces,
                                           const RunConfig& cfg, const ProblemSpec& problem) {
  constexpr int kGridSize = 100;
  std::vector<AggregateRow> out;
  out.reserve(kGridSize);
  const double b0 = 0.2 * cfg.budget;
  const double b1 = cfg.budget;
  for (int i = 0; i < kGridSize; ++i) {
    AggregateRow row;
    row.budget = b0 + (b1 - b0) * static_cast<double>(i) / (kGridSize - 1);
    double sum = 0.0;
    double sum_sq = 0.0;
    int n = 0;
    for (const auto& trace : traces) {
      if (!trace.completed) continue;
      const double best = trace.best_value_at(row.budget);
      if (std::isnan(best)) continue;
      const double metric = problem.known_max.has_value()
                                ? log_regret(*problem.known_max, best)
                                : std::numeric_limits<double>::quiet_NaN();
      if (std::isnan(metric)) continue;
      sum += metric;
      sum_sq += metric * metric;
      ++n;
    }
    row.n_reps = n;
    if (n > 0) {
      row.mean_log_regret = sum / n;
      const double var = n > 1 ? std::max(0.0, (sum_sq - sum * sum / n) / (n - 1)) : 0.0;
      const double half = 1.959963984540054 * std::sqrt(var / n);
      row.ci_low = row.mean_log_regret - half;
      row.ci_high = row.mean_log_regret + half;
    } else {
      row.mean_log_regret = std::numeric_limits<double>::quiet_NaN();
      row.ci_low = row.mean_log_regret;
      row.ci_high = row.mean_log_regret;
    }
    out.push_back(row);
  }
  return out;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trace_csv(const std::vector<RegretTrace>& traces) {
  std::ostringstream out;
  out << "rep,eval_index,excluded_flag,cumulative_cost,y,z,best_value,log_regret,"
         "wallclock_seconds\n";
  for (const auto& trace : traces) {
    for (const auto& r : trace.rows) {
      out << trace.replication << ',' << r.eval_index << ',' << (r.excluded ? 1 : 0) << ','
          << format_g17(r.cumulative_cost) << ',' << format_g17(r.y) << ',' << format_g17(r.z)
          << ',' << format_g17(r.best_value) << ',' << format_g17(r.log_regret) << ','
          << format_g17(r.wallclock_seconds) << '\n';
    }
  }
  return out.str();
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "budget,mean_log_regret,ci_low,ci_high,n_reps\n";
  for (const auto& r : rows) {
    out << format_g17(r.budget) << ',' << format_g17(r.mean_log_regret) << ','
        << format_g17(r.ci_low) << ',' << format_g17(r.ci_high) << ',' << r.n_reps << '\n';
  }
  return out.str();
}

ExperimentResult run_experiment(const RunConfig& cfg) {
  if (!(cfg.budget > 0.0)) throw std::invalid_argument("run_experiment: budget must be positive");
  if (cfg.replications < 1) {
    throw std::invalid_argument("run_experiment: replications must be >= 1");
  }

  const ProblemSpec problem = resolve_problem(cfg);

  ExperimentResult result;
  result.traces.resize(static_cast<std::size_t>(cfg.replications));

  int n_threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, cfg.replications));

  std::atomic<int> next_rep{0};
  const auto worker = [&] {
    for (;;) {
      const int rep = next_rep.fetch_add(1);
      if (rep >= cfg.replications) return;
      auto& slot = result.traces[static_cast<std::size_t>(rep)];
      try {
        slot = run_replication(cfg, problem, rep);
      } catch (const std::exception& e) {
        slot.replication = rep;
        slot.completed = false;
        slot.error = e.what();
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  result.aggregate = aggregate_traces(result.traces, cfg, problem);

  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);

    result.trace_path = (dir / "trace.csv").string();
    std::ofstream(result.trace_path) << trace_csv(result.traces);

    result.aggregate_path = (dir / "aggregate.csv").string();
    std::ofstream(result.aggregate_path) << aggregate_csv(result.aggregate);

    std::ofstream(dir / "config.txt") << serialize_run_config(cfg);

    std::ostringstream failures;
    for (const auto& trace : result.traces) {
      if (!trace.completed) failures << "rep " << trace.replication << ": " << trace.error << '\n';
    }
    if (!failures.str().empty()) std::ofstream(dir / "failures.txt") << failures.str();
  }
  return result;
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string branching_csv;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string value;
    std::getline(ls, value);
    const auto start = value.find_first_not_of(" \t");
    value = (start == std::string::npos) ? std::string() : value.substr(start);
    const auto end = value.find_last_not_of(" \t\r");
    if (end != std::string::npos) value.erase(end + 1);

    if (key == "problem") {
      cfg.problem = value;
    } else if (key == "acq") {
      cfg.acq.kind = parse_acq_kind(value);
    } else if (key == "lookahead") {
      cfg.acq.lookahead = std::stoi(value);
    } else if (key == "branching") {
      branching_csv = value;
    } else if (key == "budget") {
      cfg.budget = std::stod(value);
    } else if (key == "reps") {
      cfg.replications = std::stoi(value);
    } else if (key == "seed") {
      cfg.root_seed = std::stoull(value);
    } else if (key == "optimizer_preset") {
      cfg.optimizer_preset = value;
      if (value == "desk") {
        cfg.optimizer = OptimizerConfig::desk();
      } else if (value == "paper") {
        cfg.optimizer = OptimizerConfig::paper();
      } else {
        throw std::invalid_argument("unknown optimizer preset: " + value);
      }
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "threads") {
      cfg.threads = std::stoi(value);
    } else if (key == "timing") {
      cfg.timing = (value == "1" || value == "true");
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  if (!branching_csv.empty()) {
    cfg.acq.branching.clear();
    std::istringstream bs(branching_csv);
    std::string tok;
    while (std::getline(bs, tok, ',')) cfg.acq.branching.push_back(std::stoi(tok));
  }
  return cfg;
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "problem " << cfg.problem << '\n';
  switch (cfg.acq.kind) {
    case AcqKind::ei:
      out << "acq ei\n";
      break;
    case AcqKind::ei_puc:
      out << "acq ei_puc\n";
      break;
    case AcqKind::ei_puc_cc:
      out << "acq ei_puc_cc\n";
      break;
    case AcqKind::bmsei:
      out << "acq bmsei\n";
      break;
    case AcqKind::bmsei_path:
      out << "acq bmsei_path\n";
      break;
  }
  if (cfg.acq.is_tree()) {
    out << "lookahead " << cfg.acq.lookahead << '\n';
    if (!cfg.acq.branching.empty()) {
      out << "branching ";
      for (std::size_t i = 0; i < cfg.acq.branching.size(); ++i) {
        if (i > 0) out << ',';
        out << cfg.acq.branching[i];
      }
      out << '\n';
    }
  }
  out << "budget " << format_g17(cfg.budget) << '\n';
  out << "reps " << cfg.replications << '\n';
  out << "seed " << cfg.root_seed << '\n';
  out << "optimizer_preset " << cfg.optimizer_preset << '\n';
  out << "threads " << cfg.threads << '\n';
  out << "timing " << (cfg.timing ? 1 : 0) << '\n';
  if (!cfg.out_dir.empty()) out << "out " << cfg.out_dir << '\n';
  return out.str();
}

}  // namespace budgetbo
