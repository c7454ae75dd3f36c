#include "budgetbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "budgetbo/bfgs.hpp"
#include "budgetbo/rng.hpp"

namespace budgetbo {

namespace {

constexpr double kTwoPi = 6.2831853071795864769252867665590;

Eigen::MatrixXd build_covariance(const Eigen::MatrixXd& x, const KernelParams& p, double jitter) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = p.outputscale + p.noise_variance + jitter;
    for (int j = 0; j < i; ++j) {
      double u = 0.0;
      for (int c = 0; c < d; ++c) {
        const double t = (x(i, c) - x(j, c)) / p.lengthscales[c];
        u += t * t;
      }
      const double v = detail::matern52_from_u(p.outputscale, u);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

// Cholesky with jitter escalation x10 up to 1e-2.  Returns the jitter that
// succeeded through *jitter_used, or throws GpFitError.
Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& x, const KernelParams& p,
                                double* jitter_used) {
  double jitter = 0.0;
  for (;;) {
    Eigen::LLT<Eigen::MatrixXd> llt(build_covariance(x, p, jitter));
    if (llt.info() == Eigen::Success) {
      *jitter_used = jitter;
      return llt.matrixL();
    }
    jitter = (jitter == 0.0) ? 1e-6 : jitter * 10.0;
    if (jitter > 1e-2) {
      throw GpFitError("training covariance is singular after jitter escalation");
    }
  }
}

struct MapProblem {
  const Eigen::MatrixXd* x;
  Eigen::VectorXd y;  // standardized targets
  const GpPriorConfig* cfg;
  std::vector<Eigen::MatrixXd> sqdist;  // per-dimension squared differences
  int n = 0;
  int d = 0;

  MapProblem(const Eigen::MatrixXd& inputs, Eigen::VectorXd targets, const GpPriorConfig& c)
      : x(&inputs), y(std::move(targets)), cfg(&c) {
    n = static_cast<int>(inputs.rows());
    d = static_cast<int>(inputs.cols());
    sqdist.reserve(static_cast<std::size_t>(d));
    for (int c2 = 0; c2 < d; ++c2) {
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double t = inputs(i, c2) - inputs(j, c2);
          m(i, j) = t * t;
        }
      sqdist.push_back(std::move(m));
    }
  }

  KernelParams unpack(const Eigen::VectorXd& theta) const {
    KernelParams p;
    p.lengthscales = theta.head(d).array().exp();
    p.outputscale = std::exp(theta[d]);
    p.noise_variance = std::max(std::exp(theta[d + 1]), cfg->noise_floor);
    return p;
  }

  // log marginal likelihood (constant mean profiled out) + log Gamma priors.
  double eval(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
    const KernelParams p = unpack(theta);
    const double s2 = p.outputscale;

    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
    for (int c = 0; c < d; ++c) u += sqdist[static_cast<std::size_t>(c)] / (p.lengthscales[c] * p.lengthscales[c]);
    const Eigen::ArrayXXd r = u.array().sqrt();
    const Eigen::ArrayXXd e = (-detail::kSqrt5 * r).exp();
    const Eigen::ArrayXXd base = (1.0 + detail::kSqrt5 * r + (5.0 / 3.0) * u.array()) * e;
    Eigen::MatrixXd kmat = s2 * base.matrix();
    kmat.diagonal().array() += p.noise_variance;

    Eigen::LLT<Eigen::MatrixXd> llt(kmat);
    if (llt.info() != Eigen::Success) {
      if (grad != nullptr) grad->setZero(theta.size());
      return -1e100;
    }
    const Eigen::MatrixXd l = llt.matrixL();

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd lu = l.triangularView<Eigen::Lower>().solve(ones);
    const Eigen::VectorXd lv = l.triangularView<Eigen::Lower>().solve(y);
    const double mean = lu.dot(lv) / lu.dot(lu);
    const Eigen::VectorXd gamma = lv - mean * lu;

    double logdet = 0.0;
    for (int i = 0; i < n; ++i) logdet += std::log(l(i, i));
    double obj = -0.5 * gamma.squaredNorm() - logdet - 0.5 * n * std::log(kTwoPi);

    // Gamma log-densities on the natural-scale hyperparameters
    const auto& lp = cfg->lengthscale;
    for (int c = 0; c < d; ++c) obj += (lp.shape - 1.0) * std::log(p.lengthscales[c]) - lp.rate * p.lengthscales[c];
    obj += (cfg->outputscale.shape - 1.0) * std::log(s2) - cfg->outputscale.rate * s2;
    obj += (cfg->noise.shape - 1.0) * std::log(p.noise_variance) - cfg->noise.rate * p.noise_variance;

    if (grad != nullptr) {
      grad->resize(theta.size());
      const Eigen::VectorXd alpha = l.transpose().triangularView<Eigen::Upper>().solve(gamma);
      Eigen::MatrixXd kinv = Eigen::MatrixXd::Identity(n, n);
      llt.solveInPlace(kinv);
      const Eigen::MatrixXd m = alpha * alpha.transpose() - kinv;

      const Eigen::ArrayXXd dk_dr_common = s2 * (5.0 / 3.0) * (1.0 + detail::kSqrt5 * r) * e;
      for (int c = 0; c < d; ++c) {
        const Eigen::ArrayXXd uc = sqdist[static_cast<std::size_t>(c)].array() / (p.lengthscales[c] * p.lengthscales[c]);
        (*grad)[c] = 0.5 * (m.array() * (dk_dr_common * uc)).sum() +
                     (lp.shape - 1.0) - lp.rate * p.lengthscales[c];
      }
      (*grad)[d] = 0.5 * (m.array() * (s2 * base)).sum() +
                   (cfg->outputscale.shape - 1.0) - cfg->outputscale.rate * s2;
      (*grad)[d + 1] = 0.5 * p.noise_variance * m.trace() +
                       (cfg->noise.shape - 1.0) - cfg->noise.rate * p.noise_variance;
      // at the clamped noise floor the coordinate is pinned by the box anyway
    }
    return obj;
  }
};

void sort_canonically(Eigen::MatrixXd& x, Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int c = 0; c < x.cols(); ++c) {
      if (x(a, c) != x(b, c)) return x(a, c) < x(b, c);
    }
    return y[a] < y[b];
  });
  Eigen::MatrixXd xs(n, x.cols());
  Eigen::VectorXd ys(n);
  for (int i = 0; i < n; ++i) {
    xs.row(i) = x.row(order[static_cast<std::size_t>(i)]);
    ys[i] = y[order[static_cast<std::size_t>(i)]];
  }
  x = std::move(xs);
  y = std::move(ys);
}

}  // namespace

GpModel::GpModel(Eigen::MatrixXd inputs, Eigen::VectorXd targets_raw, KernelParams params,
                 double mean_constant, double target_shift, double target_scale)
    : inputs_(std::move(inputs)),
      targets_raw_(std::move(targets_raw)),
      params_(std::move(params)),
      mean_(mean_constant),
      shift_(target_shift),
      scale_(target_scale) {
  if (inputs_.rows() != targets_raw_.size() || inputs_.rows() < 1) {
    throw std::invalid_argument("GpModel: inputs/targets size mismatch or empty");
  }
  if (params_.lengthscales.size() != inputs_.cols()) {
    throw std::invalid_argument("GpModel: lengthscale count must match input dimension");
  }
  targets_std_ = (targets_raw_.array() - shift_) / scale_;
  factorize();
}

void GpModel::factorize() {
  double jitter = 0.0;
  chol_ = robust_cholesky(inputs_, params_, &jitter);
  if (jitter > 0.0) params_.noise_variance += jitter;
  gamma_ = chol_.triangularView<Eigen::Lower>().solve(
      (targets_std_.array() - mean_).matrix());
}

GpModel GpModel::with_gls_mean(Eigen::MatrixXd inputs, Eigen::VectorXd targets_raw,
                               KernelParams params, double target_shift, double target_scale) {
  GpModel m(std::move(inputs), std::move(targets_raw), std::move(params), 0.0, target_shift,
            target_scale);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.size());
  const Eigen::VectorXd lu = m.chol_.triangularView<Eigen::Lower>().solve(ones);
  const Eigen::VectorXd lv = m.chol_.triangularView<Eigen::Lower>().solve(m.targets_std_);
  m.mean_ = lu.dot(lv) / lu.dot(lu);
  m.gamma_ = lv - m.mean_ * lu;
  return m;
}

PosteriorSummary GpModel::posterior(const Eigen::VectorXd& x) const {
  FantasyChain<double> chain(*this);
  std::vector<double> xv(x.data(), x.data() + x.size());
  PosteriorSummary s;
  chain.posterior(xv, &s.mean, &s.stddev);
  return s;
}

GpModel GpModel::condition(const Eigen::VectorXd& x, double y_raw) const {
  const int n = size();
  const int d = dim();
  GpModel out;
  out.inputs_.resize(n + 1, d);
  out.inputs_.topRows(n) = inputs_;
  out.inputs_.row(n) = x.transpose();
  out.targets_raw_.resize(n + 1);
  out.targets_raw_.head(n) = targets_raw_;
  out.targets_raw_[n] = y_raw;
  out.params_ = params_;
  out.mean_ = mean_;
  out.shift_ = shift_;
  out.scale_ = scale_;
  out.targets_std_ = (out.targets_raw_.array() - shift_) / scale_;

  Eigen::VectorXd k(n);
  for (int j = 0; j < n; ++j) {
    k[j] = detail::matern52(params_, x.data(), inputs_.row(j).transpose().eval().data(), d);
  }
  const Eigen::VectorXd r = chol_.triangularView<Eigen::Lower>().solve(k);
  const double diag = params_.outputscale + params_.noise_variance - r.squaredNorm();
  if (diag <= 1e-12 * params_.outputscale) {
    out.factorize();  // exact rebuild with jitter escalation
    return out;
  }
  const double l_self = std::sqrt(diag);
  out.chol_.setZero(n + 1, n + 1);
  out.chol_.topLeftCorner(n, n) = chol_;
  out.chol_.row(n).head(n) = r.transpose();
  out.chol_(n, n) = l_self;
  out.gamma_.resize(n + 1);
  out.gamma_.head(n) = gamma_;
  out.gamma_[n] = (out.targets_std_[n] - mean_ - r.dot(gamma_)) / l_self;
  return out;
}

double map_objective(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                     const GpPriorConfig& cfg, const KernelParams& params) {
  Eigen::VectorXd y = targets;
  double shift = 0.0;
  double scale = 1.0;
  if (cfg.standardize_targets) {
    shift = y.mean();
    const double sd = std::sqrt((y.array() - shift).square().sum() /
                                std::max<int>(1, static_cast<int>(y.size()) - 1));
    scale = (sd > 1e-12) ? sd : 1.0;
    y = ((y.array() - shift) / scale).matrix();
  }
  MapProblem prob(inputs, y, cfg);
  const int d = static_cast<int>(inputs.cols());
  Eigen::VectorXd theta(d + 2);
  for (int c = 0; c < d; ++c) theta[c] = std::log(params.lengthscales[c]);
  theta[d] = std::log(params.outputscale);
  theta[d + 1] = std::log(params.noise_variance);
  return prob.eval(theta, nullptr);
}

GpModel fit_map(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                const GpPriorConfig& cfg) {
  const int n = static_cast<int>(inputs.rows());
  const int d = static_cast<int>(inputs.cols());
  if (n < 2) throw std::invalid_argument("fit_map: at least 2 observations required");
  if (inputs.size() != 0 && (inputs.minCoeff() < -1e-9 || inputs.maxCoeff() > 1.0 + 1e-9)) {
    throw std::invalid_argument("fit_map: inputs must lie in the unit box");
  }

  Eigen::MatrixXd x = inputs;
  Eigen::VectorXd y_raw = targets;
  sort_canonically(x, y_raw);

  double shift = 0.0;
  double scale = 1.0;
  if (cfg.standardize_targets) {
    shift = y_raw.mean();
    const double sd = std::sqrt((y_raw.array() - shift).square().sum() / std::max(1, n - 1));
    scale = (sd > 1e-12) ? sd : 1.0;
  }
  const Eigen::VectorXd y_std = ((y_raw.array() - shift) / scale).matrix();

  MapProblem prob(x, y_std, cfg);

  const int nv = d + 2;
  Eigen::VectorXd lo(nv);
  Eigen::VectorXd hi(nv);
  for (int c = 0; c < d; ++c) {
    lo[c] = std::log(5e-3);
    hi[c] = std::log(50.0);
  }
  lo[d] = std::log(1e-4);
  hi[d] = std::log(1e4);
  lo[d + 1] = std::log(cfg.noise_floor);
  hi[d + 1] = std::log(1.0);

  const BoxObjective obj = [&prob](const Eigen::VectorXd& t, Eigen::VectorXd* g) {
    return prob.eval(t, g);
  };

  Eigen::VectorXd best_theta;
  double best_value = -std::numeric_limits<double>::infinity();
  RngStream starts(derive_seed(cfg.seed, {0x6669746d6170ULL}));
  for (int s = 0; s < std::max(1, cfg.restarts); ++s) {
    Eigen::VectorXd t0(nv);
    if (s == 0) {
      for (int c = 0; c < d; ++c) t0[c] = std::log(1.0 / 3.0);
      t0[d] = 0.0;
      t0[d + 1] = std::log(1e-4);
    } else {
      for (int c = 0; c < d; ++c) t0[c] = starts.uniform(std::log(0.05), std::log(2.0));
      t0[d] = starts.uniform(std::log(0.1), std::log(10.0));
      t0[d + 1] = starts.uniform(std::log(cfg.noise_floor), std::log(1e-2));
    }
    const BoxAscentResult r = ascend_box(obj, std::move(t0), lo, hi, cfg.max_iters, cfg.grad_tol);
    if (r.value > best_value) {
      best_value = r.value;
      best_theta = r.x;
    }
  }
  if (!std::isfinite(best_value)) {
    throw GpFitError("fit_map: no hyperparameter start produced a finite objective");
  }

  return GpModel::with_gls_mean(std::move(x), std::move(y_raw), prob.unpack(best_theta), shift,
                                scale);
}

}  // namespace budgetbo
