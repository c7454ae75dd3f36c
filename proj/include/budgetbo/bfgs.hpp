#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

namespace budgetbo {

// Objective callback: returns f(x); fills *grad when non-null.
using BoxObjective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

struct BoxAscentResult {
  Eigen::VectorXd x;
  double value = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool line_search_failed = false;
};

namespace detail {

inline Eigen::VectorXd clamp_box(Eigen::VectorXd x, const Eigen::VectorXd& lo,
                                 const Eigen::VectorXd& hi) {
  for (int i = 0; i < x.size(); ++i) x[i] = std::min(std::max(x[i], lo[i]), hi[i]);
  return x;
}

}  // namespace detail

// Monotone box-constrained local ascent: dense BFGS direction, gradient
// projection at active bounds, backtracking line search.  Deterministic.
inline BoxAscentResult ascend_box(const BoxObjective& f, Eigen::VectorXd x0,
                                  const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                  int max_iters, double tol) {
  const int n = static_cast<int>(x0.size());
  BoxAscentResult res;
  res.x = detail::clamp_box(std::move(x0), lo, hi);

  Eigen::VectorXd g(n);
  double fx = f(res.x, &g);
  res.value = fx;
  if (!std::isfinite(fx)) {
    res.line_search_failed = true;
    return res;
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool made_step = false;

  for (int iter = 0; iter < max_iters; ++iter) {
    res.iterations = iter + 1;

    // projected gradient stationarity test
    const Eigen::VectorXd pg = detail::clamp_box(res.x + g, lo, hi) - res.x;
    if (pg.lpNorm<Eigen::Infinity>() <= tol) break;

    Eigen::VectorXd dir = h * g;
    // keep the search direction ascent-aligned and feasible at active bounds
    for (int i = 0; i < n; ++i) {
      if ((res.x[i] <= lo[i] && dir[i] < 0.0) || (res.x[i] >= hi[i] && dir[i] > 0.0)) dir[i] = 0.0;
    }
    if (dir.dot(g) <= 0.0) {
      h.setIdentity();
      dir = pg;
    }
    if (dir.lpNorm<Eigen::Infinity>() <= 1e-15) break;

    // backtracking on the projected step actually taken; if the quasi-Newton
    // direction dies against the bounds, retry along the projected gradient
    bool accepted = false;
    Eigen::VectorXd x_new;
    Eigen::VectorXd g_new(n);
    double f_new = fx;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) {
        if (dir == pg) break;
        dir = pg;
        h.setIdentity();
      }
      double t = 1.0;
      for (int ls = 0; ls < 40; ++ls) {
        x_new = detail::clamp_box(res.x + t * dir, lo, hi);
        const double proj_slope = g.dot(x_new - res.x);
        if (proj_slope > 0.0) {
          f_new = f(x_new, &g_new);
          if (std::isfinite(f_new) && f_new >= fx + 1e-4 * proj_slope) {
            accepted = true;
            break;
          }
        }
        t *= 0.5;
      }
    }
    if (!accepted) {
      if (!made_step) res.line_search_failed = true;
      break;
    }

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    // BFGS update on the ascent problem (curvature condition s'y < 0 here);
    // written via the minimization form with y -> -y
    const double sy_min = -sy;
    if (sy_min > 1e-12 * s.norm() * yv.norm()) {
      const Eigen::VectorXd ym = -yv;
      const double rho = 1.0 / sy_min;
      const Eigen::VectorXd hy = h * ym;
      h -= rho * (hy * s.transpose() + s * hy.transpose());
      h += rho * rho * (ym.dot(hy) + sy_min) * (s * s.transpose());
    }

    res.x = std::move(x_new);
    fx = f_new;
    g = g_new;
    res.value = fx;
    made_step = true;
  }
  return res;
}

// Central finite differences for objectives that supply no gradient.
inline BoxObjective with_numeric_gradient(std::function<double(const Eigen::VectorXd&)> f,
                                          double step = 1e-6) {
  return [f = std::move(f), step](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const double v = f(x);
    if (grad != nullptr) {
      grad->resize(x.size());
      Eigen::VectorXd xp = x;
      for (int i = 0; i < x.size(); ++i) {
        const double saved = xp[i];
        xp[i] = saved + step;
        const double fp = f(xp);
        xp[i] = saved - step;
        const double fm = f(xp);
        xp[i] = saved;
        (*grad)[i] = (fp - fm) / (2.0 * step);
      }
    }
    return v;
  };
}

}  // namespace budgetbo
