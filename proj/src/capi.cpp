#include "budgetbo.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "budgetbo/harness.hpp"
#include "budgetbo/problems.hpp"
#include "budgetbo/theorem1.hpp"

struct bbo_problem {
  budgetbo::ProblemSpec spec;
  bool synthetic = false;
};

namespace {

thread_local std::string g_last_error;

bbo_status fail(bbo_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
bbo_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const budgetbo::GpFitError& e) {
    return fail(BBO_NUMERICAL_ERROR, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BBO_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(BBO_UNKNOWN_ERROR, e.what());
  } catch (...) {
    return fail(BBO_UNKNOWN_ERROR, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* bbo_version(void) { return "1.0.0"; }

const char* bbo_last_error(void) { return g_last_error.c_str(); }

bbo_status bbo_problem_create(const char* name, bbo_problem** out) {
  if (name == nullptr || out == nullptr) return fail(BBO_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* p = new bbo_problem{budgetbo::make_synthetic(std::string(name)), true};
    *out = p;
    return BBO_OK;
  });
}

bbo_status bbo_problem_load_tabular(const char* path, bbo_problem** out) {
  if (path == nullptr || out == nullptr) return fail(BBO_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    try {
      auto* p = new bbo_problem{budgetbo::load_tabular(std::string(path)), false};
      *out = p;
      return BBO_OK;
    } catch (const std::runtime_error& e) {
      return fail(BBO_IO_ERROR, e.what());
    }
  });
}

void bbo_problem_free(bbo_problem* problem) { delete problem; }

int bbo_problem_dim(const bbo_problem* problem) {
  return problem == nullptr ? -1 : problem->spec.dim;
}

bbo_status bbo_problem_bounds(const bbo_problem* problem, double* lower, double* upper) {
  if (problem == nullptr || lower == nullptr || upper == nullptr) {
    return fail(BBO_INVALID_ARGUMENT, "null argument");
  }
  for (int i = 0; i < problem->spec.dim; ++i) {
    lower[i] = problem->spec.lower[i];
    upper[i] = problem->spec.upper[i];
  }
  return BBO_OK;
}

bbo_status bbo_problem_objective(const bbo_problem* problem, const double* x, double* y) {
  if (problem == nullptr || x == nullptr || y == nullptr) {
    return fail(BBO_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> xv(x, problem->spec.dim);
    *y = problem->spec.objective(xv);
    return BBO_OK;
  });
}

bbo_status bbo_problem_cost(const bbo_problem* problem, const double* x, double* z) {
  if (problem == nullptr || x == nullptr || z == nullptr) {
    return fail(BBO_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> xv(x, problem->spec.dim);
    *z = problem->spec.cost(xv);
    return BBO_OK;
  });
}

bbo_status bbo_problem_known_max(const bbo_problem* problem, double* known_max) {
  if (problem == nullptr || known_max == nullptr) {
    return fail(BBO_INVALID_ARGUMENT, "null argument");
  }
  if (!problem->spec.known_max.has_value()) {
    return fail(BBO_INVALID_ARGUMENT, "problem has no known maximum");
  }
  *known_max = *problem->spec.known_max;
  return BBO_OK;
}

bbo_status bbo_problem_set_cost_params(bbo_problem* problem, double alpha, double beta,
                                       double gamma) {
  if (problem == nullptr) return fail(BBO_INVALID_ARGUMENT, "null argument");
  if (!problem->synthetic || !problem->spec.known_argmax.has_value()) {
    return fail(BBO_INVALID_ARGUMENT, "cost family applies to synthetic problems only");
  }
  return guarded([&] {
    budgetbo::CostFamilyParams params{alpha, beta, gamma, *problem->spec.known_argmax};
    problem->spec = budgetbo::with_cost_family(std::move(problem->spec), std::move(params));
    return BBO_OK;
  });
}

int bbo_problem_count(void) { return static_cast<int>(budgetbo::synthetic_names().size()); }

const char* bbo_problem_name(int index) {
  static const std::vector<std::string> names = budgetbo::synthetic_names();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  return names[static_cast<std::size_t>(index)].c_str();
}

bbo_status bbo_run_experiment(const char* config_text) {
  if (config_text == nullptr) return fail(BBO_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    const budgetbo::RunConfig cfg = budgetbo::parse_run_config(std::string(config_text));
    budgetbo::run_experiment(cfg);
    return BBO_OK;
  });
}

bbo_status bbo_theorem1_report(const double* epsilons, int n_epsilons, double delta,
                               long n_trajectories, unsigned long long seed, char** out_csv) {
  if (epsilons == nullptr || n_epsilons < 1 || out_csv == nullptr) {
    return fail(BBO_INVALID_ARGUMENT, "null or empty argument");
  }
  return guarded([&] {
    const std::vector<double> eps(epsilons, epsilons + n_epsilons);
    const std::string csv =
        budgetbo::ratio_report_csv(budgetbo::ratio_report(eps, delta, n_trajectories, seed));
    char* buf = static_cast<char*>(std::malloc(csv.size() + 1));
    if (buf == nullptr) return fail(BBO_UNKNOWN_ERROR, "allocation failure");
    std::memcpy(buf, csv.c_str(), csv.size() + 1);
    *out_csv = buf;
    return BBO_OK;
  });
}

void bbo_string_free(char* s) { std::free(s); }

}  // extern "C"
