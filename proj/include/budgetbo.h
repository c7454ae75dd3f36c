/* budgetbo: budgeted Bayesian optimization toolkit -- C API.
 *
 * All functions return a bbo_status; on failure bbo_last_error() carries a
 * thread-local description of what went wrong.  Handles are opaque and must
 * be released with their matching _free function.
 */
#ifndef BUDGETBO_H
#define BUDGETBO_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bbo_status {
  BBO_OK = 0,
  BBO_INVALID_ARGUMENT = 1,
  BBO_IO_ERROR = 2,
  BBO_NUMERICAL_ERROR = 3,
  BBO_UNKNOWN_ERROR = 4
} bbo_status;

const char* bbo_version(void);
const char* bbo_last_error(void);

/* ---- benchmark problems ---- */

typedef struct bbo_problem bbo_problem;

/* Synthetic problem by name (see bbo_problem_name for the list). */
bbo_status bbo_problem_create(const char* name, bbo_problem** out);
/* Grid-tabulated problem from the documented text format. */
bbo_status bbo_problem_load_tabular(const char* path, bbo_problem** out);
void bbo_problem_free(bbo_problem* problem);

int bbo_problem_dim(const bbo_problem* problem);
/* lower/upper must hold dim entries. */
bbo_status bbo_problem_bounds(const bbo_problem* problem, double* lower, double* upper);
bbo_status bbo_problem_objective(const bbo_problem* problem, const double* x, double* y);
bbo_status bbo_problem_cost(const bbo_problem* problem, const double* x, double* z);
/* BBO_INVALID_ARGUMENT when the problem has no known maximum. */
bbo_status bbo_problem_known_max(const bbo_problem* problem, double* known_max);
/* Override the periodic cost family parameters (synthetic problems only). */
bbo_status bbo_problem_set_cost_params(bbo_problem* problem, double alpha, double beta,
                                       double gamma);

int bbo_problem_count(void);
const char* bbo_problem_name(int index);

/* ---- experiments ---- */

/* Runs a budgeted BO experiment described by a flat key-value config text
 * (one `key value` pair per line): problem, acq, lookahead, branching,
 * budget, reps, seed, optimizer_preset, threads, timing, out.
 * Writes trace.csv / aggregate.csv / config.txt under the `out` directory. */
bbo_status bbo_run_experiment(const char* config_text);

/* ---- counterexample verification ---- */

/* Monte-Carlo policy ratio table over the discrete counterexample instances.
 * On success *out_csv receives a malloc'd CSV string; release it with
 * bbo_string_free. */
bbo_status bbo_theorem1_report(const double* epsilons, int n_epsilons, double delta,
                               long n_trajectories, unsigned long long seed, char** out_csv);

void bbo_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* BUDGETBO_H */
