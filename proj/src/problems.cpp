#include "budgetbo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "budgetbo/bfgs.hpp"

namespace budgetbo {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

ProblemSpec dropwave() {
  ProblemSpec p;
  p.name = "dropwave";
  p.dim = 2;
  p.lower = Eigen::VectorXd::Constant(2, -5.12);
  p.upper = Eigen::VectorXd::Constant(2, 5.12);
  p.objective = [](const Eigen::VectorXd& x) {
    const double r2 = x.squaredNorm();
    return (1.0 + std::cos(12.0 * std::sqrt(r2))) / (0.5 * r2 + 2.0);
  };
  p.known_max = 1.0;
  p.known_argmax = Eigen::VectorXd::Zero(2);
  return p;
}

ProblemSpec alpine1() {
  ProblemSpec p;
  p.name = "alpine1";
  p.dim = 3;
  p.lower = Eigen::VectorXd::Constant(3, -10.0);
  p.upper = Eigen::VectorXd::Constant(3, 10.0);
  p.objective = [](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += std::abs(x[i] * std::sin(x[i]) + 0.1 * x[i]);
    return -s;  // maximization convention
  };
  p.known_max = 0.0;
  p.known_argmax = Eigen::VectorXd::Zero(3);
  return p;
}

ProblemSpec ackley() {
  ProblemSpec p;
  p.name = "ackley";
  p.dim = 3;
  p.lower = Eigen::VectorXd::Constant(3, -1.0);
  p.upper = Eigen::VectorXd::Constant(3, 1.0);
  p.objective = [](const Eigen::VectorXd& x) {
    const double d = static_cast<double>(x.size());
    double sum_sq = 0.0;
    double sum_cos = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      sum_sq += x[i] * x[i];
      sum_cos += std::cos(2.0 * kPi * x[i]);
    }
    return 20.0 * std::exp(-0.2 * std::sqrt(sum_sq / d)) + std::exp(sum_cos / d) - 20.0 -
           std::exp(1.0);
  };
  p.known_max = 0.0;
  p.known_argmax = Eigen::VectorXd::Zero(3);
  return p;
}

double shekel5_value(const Eigen::VectorXd& x) {
  static const double c[4][5] = {{4, 1, 8, 6, 3}, {4, 1, 8, 6, 7}, {4, 1, 8, 6, 3}, {4, 1, 8, 6, 7}};
  static const double b[5] = {0.1, 0.2, 0.2, 0.4, 0.4};
  double s = 0.0;
  for (int j = 0; j < 5; ++j) {
    double q = b[j];
    for (int i = 0; i < 4; ++i) {
      const double t = x[i] - c[i][j];
      q += t * t;
    }
    s += 1.0 / q;
  }
  return s;
}

ProblemSpec shekel5() {
  ProblemSpec p;
  p.name = "shekel5";
  p.dim = 4;
  p.lower = Eigen::VectorXd::Zero(4);
  p.upper = Eigen::VectorXd::Constant(4, 10.0);
  p.objective = [](const Eigen::VectorXd& x) { return shekel5_value(x); };

  // The maximum sits near (4,4,4,4); polish it once, deterministically.
  struct Optimum {
    Eigen::VectorXd x;
    double value;
  };
  static const Optimum opt = [] {
    const BoxObjective f =
        with_numeric_gradient([](const Eigen::VectorXd& x) { return shekel5_value(x); }, 1e-7);
    const BoxAscentResult r =
        ascend_box(f, Eigen::VectorXd::Constant(4, 4.0), Eigen::VectorXd::Zero(4),
                   Eigen::VectorXd::Constant(4, 10.0), 500, 1e-12);
    return Optimum{r.x, r.value};
  }();
  p.known_max = opt.value;
  p.known_argmax = opt.x;
  return p;
}

struct CostIntervals {
  double alpha_lo, alpha_hi;
  double beta_lo, beta_hi;
  double gamma_lo, gamma_hi;
};

CostIntervals cost_intervals(SyntheticName name) {
  switch (name) {
    case SyntheticName::dropwave:
      return {0.75, 1.5, 2.0 * kPi / 5.12, 6.0 * kPi / 5.12, 0.0, 2.0 * kPi};
    case SyntheticName::alpine1:
      return {0.75, 1.5, 2.0 * kPi, 6.0 * kPi, 0.0, 2.0 * kPi};
    case SyntheticName::ackley:
      return {0.75, 1.5, 2.0 * kPi, 6.0 * kPi, 0.0, 2.0 * kPi};
    case SyntheticName::shekel5:
      return {0.75, 1.5, 2.0 * kPi / 4.0, 3.0 * kPi / 4.0, 0.0, 2.0 * kPi};
  }
  throw std::invalid_argument("unknown synthetic problem");
}

SyntheticName name_from_string(const std::string& name) {
  if (name == "dropwave") return SyntheticName::dropwave;
  if (name == "alpine1") return SyntheticName::alpine1;
  if (name == "ackley") return SyntheticName::ackley;
  if (name == "shekel5") return SyntheticName::shekel5;
  throw std::invalid_argument("unknown synthetic problem: " + name);
}

}  // namespace

ProblemSpec make_synthetic(SyntheticName name) {
  ProblemSpec p;
  switch (name) {
    case SyntheticName::dropwave:
      p = dropwave();
      break;
    case SyntheticName::alpine1:
      p = alpine1();
      break;
    case SyntheticName::ackley:
      p = ackley();
      break;
    case SyntheticName::shekel5:
      p = shekel5();
      break;
  }
  // nominal cost oracle: interval midpoints with gamma = 0 (the harness
  // resamples family parameters per replication)
  const CostIntervals iv = cost_intervals(name);
  CostFamilyParams nominal{0.5 * (iv.alpha_lo + iv.alpha_hi), 0.5 * (iv.beta_lo + iv.beta_hi), 0.0,
                           *p.known_argmax};
  return with_cost_family(std::move(p), std::move(nominal));
}

ProblemSpec make_synthetic(const std::string& name) { return make_synthetic(name_from_string(name)); }

std::vector<std::string> synthetic_names() { return {"dropwave", "alpine1", "ackley", "shekel5"}; }

CostFamilyParams sample_cost_params(SyntheticName name, RngStream& rng) {
  const CostIntervals iv = cost_intervals(name);
  CostFamilyParams p;
  p.alpha = rng.uniform(iv.alpha_lo, iv.alpha_hi);
  p.beta = rng.uniform(iv.beta_lo, iv.beta_hi);
  p.gamma = rng.uniform(iv.gamma_lo, iv.gamma_hi);
  p.anchor = *make_synthetic(name).known_argmax;
  return p;
}

CostFamilyParams sample_cost_params(const ProblemSpec& spec, RngStream& rng) {
  CostFamilyParams p = sample_cost_params(name_from_string(spec.name), rng);
  p.anchor = spec.known_argmax.value();
  return p;
}

double eval_cost(const CostFamilyParams& params, const Eigen::VectorXd& x) {
  const double d = static_cast<double>(x.size());
  double s = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    s += std::cos(params.beta * (x[i] - params.anchor[i] + params.gamma));
  }
  return std::exp(params.alpha / d * s);
}

ProblemSpec with_cost_family(ProblemSpec spec, CostFamilyParams params) {
  spec.cost = [p = std::move(params)](const Eigen::VectorXd& x) { return eval_cost(p, x); };
  return spec;
}

DiscreteInstance make_theorem1_instance(double epsilon, double delta, Theorem1Variant variant) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("make_theorem1_instance: epsilon must be in (0, 1)");
  }
  if (!(delta > 0.0)) throw std::invalid_argument("make_theorem1_instance: delta must be positive");

  DiscreteInstance inst;
  inst.variant = variant;
  inst.epsilon = epsilon;
  inst.delta = delta;
  inst.budget = 1.0 + delta;
  // tolerate float rounding when (1 + delta) / epsilon is an exact integer
  inst.k_low = static_cast<int>(std::ceil((1.0 + delta) / epsilon - 1e-9));
  inst.low_sd = (variant == Theorem1Variant::for_eipuc) ? epsilon : (1.0 - epsilon);
  inst.low_cost = epsilon;
  inst.high_sd = 1.0;
  inst.high_cost = 1.0 + delta;
  return inst;
}

namespace {

struct TabularGrid {
  int dim = 0;
  std::vector<int> sizes;
  Eigen::VectorXd lower, upper;
  std::vector<double> y, z;  // row-major, last dimension fastest

  double interpolate(const Eigen::VectorXd& x, const std::vector<double>& values) const {
    // locate the cell and the fractional coordinate per dimension
    std::vector<int> idx(static_cast<std::size_t>(dim));
    std::vector<double> frac(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      const int n = sizes[static_cast<std::size_t>(i)];
      if (n == 1) {
        idx[static_cast<std::size_t>(i)] = 0;
        frac[static_cast<std::size_t>(i)] = 0.0;
        continue;
      }
      double t = (x[i] - lower[i]) / (upper[i] - lower[i]) * (n - 1);
      t = std::min(std::max(t, 0.0), static_cast<double>(n - 1));
      int c = static_cast<int>(std::floor(t));
      c = std::min(c, n - 2);
      idx[static_cast<std::size_t>(i)] = c;
      frac[static_cast<std::size_t>(i)] = t - c;
    }
    double acc = 0.0;
    const int corners = 1 << dim;
    for (int mask = 0; mask < corners; ++mask) {
      double w = 1.0;
      long flat = 0;
      bool skip = false;
      for (int i = 0; i < dim; ++i) {
        const int n = sizes[static_cast<std::size_t>(i)];
        const bool hi = (mask >> i) & 1;
        if (hi && n == 1) {
          skip = true;
          break;
        }
        w *= hi ? frac[static_cast<std::size_t>(i)] : 1.0 - frac[static_cast<std::size_t>(i)];
        flat = flat * n + idx[static_cast<std::size_t>(i)] + (hi ? 1 : 0);
      }
      if (!skip && w != 0.0) acc += w * values[static_cast<std::size_t>(flat)];
    }
    return acc;
  }
};

}  // namespace

ProblemSpec load_tabular(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_tabular: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_tabular: empty file " + path);
  std::istringstream head(line);
  std::string tok;
  auto grid = std::make_shared<TabularGrid>();

  head >> tok;
  if (tok != "dims" || !(head >> grid->dim) || grid->dim < 1) {
    throw std::runtime_error("load_tabular: malformed header (dims)");
  }
  head >> tok;
  if (tok != "sizes") throw std::runtime_error("load_tabular: malformed header (sizes)");
  grid->sizes.resize(static_cast<std::size_t>(grid->dim));
  long total = 1;
  for (int i = 0; i < grid->dim; ++i) {
    if (!(head >> grid->sizes[static_cast<std::size_t>(i)]) || grid->sizes[static_cast<std::size_t>(i)] < 1) {
      throw std::runtime_error("load_tabular: malformed header (sizes)");
    }
    total *= grid->sizes[static_cast<std::size_t>(i)];
  }
  head >> tok;
  if (tok != "bounds") throw std::runtime_error("load_tabular: malformed header (bounds)");
  grid->lower.resize(grid->dim);
  grid->upper.resize(grid->dim);
  for (int i = 0; i < grid->dim; ++i) {
    if (!(head >> grid->lower[i] >> grid->upper[i]) || !(grid->lower[i] < grid->upper[i])) {
      throw std::runtime_error("load_tabular: malformed header (bounds)");
    }
  }

  grid->y.reserve(static_cast<std::size_t>(total));
  grid->z.reserve(static_cast<std::size_t>(total));
  double y = 0.0;
  double z = 0.0;
  while (in >> y >> z) {
    if (!(z > 0.0)) throw std::runtime_error("load_tabular: costs must be positive");
    grid->y.push_back(y);
    grid->z.push_back(z);
  }
  if (static_cast<long>(grid->y.size()) != total) {
    throw std::runtime_error("load_tabular: vertex count does not match the declared grid");
  }

  ProblemSpec p;
  p.name = "tabular";
  p.dim = grid->dim;
  p.lower = grid->lower;
  p.upper = grid->upper;
  p.objective = [grid](const Eigen::VectorXd& x) { return grid->interpolate(x, grid->y); };
  p.cost = [grid](const Eigen::VectorXd& x) { return grid->interpolate(x, grid->z); };
  return p;
}

}  // namespace budgetbo
