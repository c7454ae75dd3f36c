#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "budgetbo.h"

namespace {

int die(const char* context) {
  std::cerr << context << ": " << bbo_last_error() << '\n';
  return 1;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"budgetbo: budgeted Bayesian optimization under unknown evaluation costs"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "run a budgeted BO experiment");
  std::string problem = "dropwave";
  std::string acq = "ei";
  int lookahead = 0;
  std::string branching;
  double budget = 30.0;
  int reps = 20;
  unsigned long long seed = 0;
  std::string out_dir = "runs/out";
  std::string preset = "desk";
  int threads = 0;
  bool timing = false;
  std::string config_path;
  auto* opt_problem = run->add_option("--problem", problem, "synthetic problem name or tabular:<path>");
  auto* opt_acq = run->add_option("--acq", acq, "ei | ei_puc | ei_puc_cc | bmsei | bmsei_path");
  auto* opt_lookahead = run->add_option("--lookahead", lookahead, "lookahead steps N for the tree acquisitions");
  auto* opt_branching = run->add_option("--branching", branching, "comma-separated fantasy counts m1,...,m_{N-1}");
  auto* opt_budget = run->add_option("--budget", budget, "total evaluation-cost budget B");
  auto* opt_reps = run->add_option("--reps", reps, "number of replications");
  auto* opt_seed = run->add_option("--seed", seed, "root seed");
  auto* opt_out = run->add_option("--out", out_dir, "output directory for trace.csv / aggregate.csv");
  auto* opt_preset = run->add_option("--optimizer-preset", preset, "desk | paper");
  auto* opt_threads = run->add_option("--threads", threads, "worker threads (0 = hardware)");
  auto* opt_timing = run->add_flag("--timing", timing, "measure wallclock_seconds (off keeps outputs bitwise reproducible)");
  run->add_option("--config", config_path, "config file; flags override its values");

  // ---- verify-theorem1 ----
  auto* verify = app.add_subcommand("verify-theorem1",
                                    "Monte-Carlo ratio table for the EI / EI-PUC counterexamples");
  std::string epsilons = "0.2,0.1,0.05,0.01";
  double delta = 0.1;
  long trajectories = 100000;
  unsigned long long vseed = 0;
  std::string vout;
  verify->add_option("--epsilons", epsilons, "comma-separated epsilon values");
  verify->add_option("--delta", delta, "delta parameter of the instances");
  verify->add_option("--trajectories", trajectories, "Monte-Carlo trajectories per policy");
  verify->add_option("--seed", vseed, "root seed");
  verify->add_option("--out", vout, "also write the CSV to this file");

  // ---- list-problems ----
  auto* list = app.add_subcommand("list-problems", "list built-in benchmark problems");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    // precedence: built-in defaults, then the config file, then explicit flags
    std::ostringstream cfg;
    cfg << "problem " << problem << '\n';
    cfg << "acq " << acq << '\n';
    cfg << "budget " << budget << '\n';
    cfg << "reps " << reps << '\n';
    cfg << "seed " << seed << '\n';
    cfg << "optimizer_preset " << preset << '\n';
    cfg << "threads " << threads << '\n';
    cfg << "out " << out_dir << '\n';
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot open config file: " << config_path << '\n';
        return 1;
      }
      cfg << in.rdbuf() << '\n';
    }
    if (opt_problem->count() > 0) cfg << "problem " << problem << '\n';
    if (opt_acq->count() > 0) cfg << "acq " << acq << '\n';
    if (opt_lookahead->count() > 0 && lookahead > 0) cfg << "lookahead " << lookahead << '\n';
    if (opt_branching->count() > 0 && !branching.empty()) cfg << "branching " << branching << '\n';
    if (opt_budget->count() > 0) cfg << "budget " << budget << '\n';
    if (opt_reps->count() > 0) cfg << "reps " << reps << '\n';
    if (opt_seed->count() > 0) cfg << "seed " << seed << '\n';
    if (opt_preset->count() > 0) cfg << "optimizer_preset " << preset << '\n';
    if (opt_threads->count() > 0) cfg << "threads " << threads << '\n';
    if (opt_timing->count() > 0) cfg << "timing " << (timing ? 1 : 0) << '\n';
    if (opt_out->count() > 0) cfg << "out " << out_dir << '\n';
    if (bbo_run_experiment(cfg.str().c_str()) != BBO_OK) return die("run failed");
    // the last `out` line wins, mirroring the config parser
    std::string final_out = out_dir;
    std::istringstream lines(cfg.str());
    for (std::string line; std::getline(lines, line);) {
      if (line.rfind("out ", 0) == 0) final_out = line.substr(4);
    }
    std::cout << "wrote " << final_out << "/trace.csv and " << final_out << "/aggregate.csv\n";
    return 0;
  }

  if (verify->parsed()) {
    const std::vector<double> eps = parse_double_list(epsilons);
    if (eps.empty()) {
      std::cerr << "no epsilon values given\n";
      return 1;
    }
    char* csv = nullptr;
    if (bbo_theorem1_report(eps.data(), static_cast<int>(eps.size()), delta, trajectories, vseed,
                            &csv) != BBO_OK) {
      return die("verify-theorem1 failed");
    }
    std::cout << csv;
    if (!vout.empty()) std::ofstream(vout) << csv;
    bbo_string_free(csv);
    return 0;
  }

  if (list->parsed()) {
    for (int i = 0; i < bbo_problem_count(); ++i) {
      const char* name = bbo_problem_name(i);
      bbo_problem* p = nullptr;
      if (bbo_problem_create(name, &p) != BBO_OK) return die("list-problems failed");
      std::vector<double> lo(static_cast<std::size_t>(bbo_problem_dim(p)));
      std::vector<double> hi(lo.size());
      bbo_problem_bounds(p, lo.data(), hi.data());
      std::cout << name << "  d=" << bbo_problem_dim(p) << "  box=[";
      for (std::size_t j = 0; j < lo.size(); ++j) {
        if (j > 0) std::cout << ", ";
        std::cout << '[' << lo[j] << ", " << hi[j] << ']';
      }
      std::cout << "]\n";
      bbo_problem_free(p);
    }
    std::cout << "tabular:<path>  (grid file, see README for the format)\n";
    return 0;
  }

  return 0;
}
