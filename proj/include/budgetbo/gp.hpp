#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "budgetbo/dual.hpp"

namespace budgetbo {

struct KernelParams {
  Eigen::VectorXd lengthscales;  // one per input dimension, > 0
  double outputscale = 1.0;      // signal variance, > 0
  double noise_variance = 1e-6;  // >= the configured noise floor
};

struct PosteriorSummary {
  double mean = 0.0;
  double stddev = 0.0;  // latent-function posterior, no observation noise
};

struct GammaPrior {
  double shape = 1.0;
  double rate = 1.0;
};

struct GpPriorConfig {
  GammaPrior lengthscale{3.0, 6.0};   // normalized-domain units
  GammaPrior outputscale{2.0, 0.15};
  GammaPrior noise{1.1, 0.05};
  double noise_floor = 1e-6;
  bool standardize_targets = true;
  int restarts = 8;
  int max_iters = 200;
  double grad_tol = 1e-5;
  std::uint64_t seed = 0;
};

class GpFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr double kSqrt5 = 2.2360679774997896964091736687313;
inline constexpr double kVarFloorRel = 1e-18;

// Matern 5/2 as a function of the scaled squared distance u = r^2.  The
// series branch removes the sqrt singularity at u = 0 for dual arguments.
template <typename T>
T matern52_from_u(double outputscale, const T& u) {
  if (value_of(u) < 1e-14) return outputscale * (1.0 - (5.0 / 6.0) * u);
  T r = sqrt(u);
  return outputscale * ((1.0 + kSqrt5 * r + (5.0 / 3.0) * u) * exp(-kSqrt5 * r));
}

inline double matern52(const KernelParams& p, const double* a, const double* b, int d) {
  double u = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = (a[i] - b[i]) / p.lengthscales[i];
    u += t * t;
  }
  return matern52_from_u(p.outputscale, u);
}

template <typename T>
T scaled_sqdist_to_row(const KernelParams& p, const std::vector<T>& a, const Eigen::MatrixXd& X, int row) {
  T t0 = (a[0] - X(row, 0)) / p.lengthscales[0];
  T u = t0 * t0;
  for (int i = 1; i < static_cast<int>(a.size()); ++i) {
    T t = (a[i] - X(row, i)) / p.lengthscales[i];
    u += t * t;
  }
  return u;
}

template <typename T>
T scaled_sqdist(const KernelParams& p, const std::vector<T>& a, const std::vector<T>& b) {
  T t0 = (a[0] - b[0]) / p.lengthscales[0];
  T u = t0 * t0;
  for (int i = 1; i < static_cast<int>(a.size()); ++i) {
    T t = (a[i] - b[i]) / p.lengthscales[i];
    u += t * t;
  }
  return u;
}

// Forward substitution against the leading n rows of a double factor.
template <typename T>
void forward_solve(std::vector<T>& b, const Eigen::MatrixXd& L, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) b[i] -= L(i, j) * b[j];
    b[i] = b[i] / L(i, i);
  }
}

template <typename T>
T dot_mixed(const std::vector<T>& a, const Eigen::VectorXd& b) {
  T acc = a[0] * b[0];
  for (int i = 1; i < static_cast<int>(a.size()); ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
T dot_tt(const std::vector<T>& a, const std::vector<T>& b) {
  T acc = a[0] * b[0];
  for (int i = 1; i < static_cast<int>(a.size()); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace detail

// Exact GP regression with Matern 5/2 ARD kernel and constant mean.
// Immutable once constructed; condition() returns a fresh model.
class GpModel {
 public:
  // Fixed-hyperparameter model.  mean_constant, shift and scale refer to the
  // internal (standardized) target space: model targets are
  // (y_raw - shift) / scale and predictions are mapped back transparently.
  GpModel(Eigen::MatrixXd inputs, Eigen::VectorXd targets_raw, KernelParams params,
          double mean_constant, double target_shift = 0.0, double target_scale = 1.0);

  // Same, but the constant mean is the generalized-least-squares estimate.
  static GpModel with_gls_mean(Eigen::MatrixXd inputs, Eigen::VectorXd targets_raw,
                               KernelParams params, double target_shift = 0.0,
                               double target_scale = 1.0);

  int dim() const { return static_cast<int>(inputs_.cols()); }
  int size() const { return static_cast<int>(inputs_.rows()); }
  const Eigen::MatrixXd& train_inputs() const { return inputs_; }
  const Eigen::VectorXd& train_targets() const { return targets_raw_; }
  const KernelParams& params() const { return params_; }
  double mean_constant() const { return mean_; }
  double mean_constant_raw() const { return shift_ + scale_ * mean_; }
  double target_shift() const { return shift_; }
  double target_scale() const { return scale_; }
  const Eigen::MatrixXd& cholesky_factor() const { return chol_; }
  const Eigen::VectorXd& gamma() const { return gamma_; }

  PosteriorSummary posterior(const Eigen::VectorXd& x) const;

  // Bayes update on one observation with frozen hyperparameters.  Uses an
  // exact appended-row Cholesky update and falls back to a full
  // refactorization if the update pivot degenerates.
  GpModel condition(const Eigen::VectorXd& x, double y_raw) const;

 private:
  GpModel() = default;
  void factorize();

  Eigen::MatrixXd inputs_;
  Eigen::VectorXd targets_raw_;
  Eigen::VectorXd targets_std_;
  KernelParams params_;
  double mean_ = 0.0;
  double shift_ = 0.0;
  double scale_ = 1.0;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd gamma_;  // L^{-1} (y_std - mean)

  template <typename>
  friend class FantasyChain;
};

// MAP hyperparameter fit: multi-start quasi-Newton ascent of
// log marginal likelihood + log Gamma prior density in log-parameter space.
// Deterministic given cfg.seed; invariant to training-set permutation.
GpModel fit_map(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                const GpPriorConfig& cfg);

// The objective maximized by fit_map, for the given hyperparameters (the
// constant mean is profiled out in closed form).
double map_objective(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const GpPriorConfig& cfg, const KernelParams& params);

inline double sample_reparam(const PosteriorSummary& s, double base_noise) {
  return s.mean + s.stddev * base_noise;
}

// A stack of fantasy observations layered over a fixed base model, kept as
// the trailing block rows of the joint Cholesky factor.  Pushing one point is
// O(n * depth); posteriors under base + path cost one triangular solve.
// Equivalent to repeated GpModel::condition with frozen hyperparameters, but
// allocation-light and generic over double / Dual scalars.
template <typename T>
class FantasyChain {
 public:
  explicit FantasyChain(const GpModel& base) : base_(&base) {}

  int depth() const { return static_cast<int>(points_.size()); }
  const GpModel& base() const { return *base_; }

  void push(const std::vector<T>& x, const T& y_raw) {
    const GpModel& m = *base_;
    const int n = m.size();
    const KernelParams& p = m.params_;

    std::vector<T> r = kvec_base(x);
    detail::forward_solve(r, m.chol_, n);

    std::vector<T> rq;
    rq.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      T b = detail::matern52_from_u(p.outputscale, detail::scaled_sqdist(p, x, points_[i])) -
            detail::dot_tt(c_rows_[i], r);
      for (std::size_t j = 0; j < i; ++j) b -= ls_rows_[i][j] * rq[j];
      rq.push_back(b / ls_rows_[i][i]);
    }

    T diag = (p.outputscale + p.noise_variance) - detail::dot_tt(r, r);
    for (const T& w : rq) diag -= w * w;
    const double diag_floor = 1e-12 * p.outputscale;
    if (value_of(diag) < diag_floor) diag = diag * 0.0 + diag_floor;
    T l_self = sqrt(diag);

    T g = (y_raw - m.shift_) / m.scale_ - m.mean_ - detail::dot_mixed(r, m.gamma_);
    for (std::size_t j = 0; j < rq.size(); ++j) g -= rq[j] * gamma_ext_[j];
    g = g / l_self;

    points_.push_back(x);
    c_rows_.push_back(std::move(r));
    rq.push_back(std::move(l_self));
    ls_rows_.push_back(std::move(rq));
    gamma_ext_.push_back(std::move(g));
  }

  void pop() {
    points_.pop_back();
    c_rows_.pop_back();
    ls_rows_.pop_back();
    gamma_ext_.pop_back();
  }

  // Posterior mean and stddev in raw target units.
  void posterior(const std::vector<T>& x, T* mean_raw, T* std_raw) const {
    const GpModel& m = *base_;
    const KernelParams& p = m.params_;

    std::vector<T> w = kvec_base(x);
    detail::forward_solve(w, m.chol_, m.size());

    std::vector<T> wq;
    wq.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      T b = detail::matern52_from_u(p.outputscale, detail::scaled_sqdist(p, x, points_[i])) -
            detail::dot_tt(c_rows_[i], w);
      for (std::size_t j = 0; j < i; ++j) b -= ls_rows_[i][j] * wq[j];
      wq.push_back(b / ls_rows_[i][i]);
    }

    T mean_m = detail::dot_mixed(w, m.gamma_) + m.mean_;
    for (std::size_t j = 0; j < wq.size(); ++j) mean_m += wq[j] * gamma_ext_[j];

    T var = p.outputscale - detail::dot_tt(w, w);
    for (const T& v : wq) var -= v * v;
    const double var_floor = detail::kVarFloorRel * p.outputscale;
    if (value_of(var) < var_floor) var = var * 0.0 + var_floor;

    *mean_raw = m.shift_ + m.scale_ * mean_m;
    *std_raw = m.scale_ * sqrt(var);
  }

 private:
  std::vector<T> kvec_base(const std::vector<T>& x) const {
    const GpModel& m = *base_;
    const KernelParams& p = m.params_;
    std::vector<T> k;
    k.reserve(static_cast<std::size_t>(m.size()));
    for (int j = 0; j < m.size(); ++j) {
      k.push_back(detail::matern52_from_u(p.outputscale,
                                          detail::scaled_sqdist_to_row(p, x, m.inputs_, j)));
    }
    return k;
  }

  const GpModel* base_;
  std::vector<std::vector<T>> points_;
  std::vector<std::vector<T>> c_rows_;
  std::vector<std::vector<T>> ls_rows_;
  std::vector<T> gamma_ext_;
};

}  // namespace budgetbo
