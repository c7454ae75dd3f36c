#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "budgetbo/gp.hpp"

namespace budgetbo {

struct Observation {
  Eigen::VectorXd x;
  double y = 0.0;  // objective value
  double z = 0.0;  // evaluation cost, > 0
};

// Ordered observation set; the MDP state.
class Dataset {
 public:
  Dataset() = default;

  void append(Observation obs) {
    if (!(obs.z > 0.0)) throw std::invalid_argument("Dataset: evaluation cost must be positive");
    total_cost_ += obs.z;
    observations_.push_back(std::move(obs));
  }

  int size() const { return static_cast<int>(observations_.size()); }
  bool empty() const { return observations_.empty(); }
  const Observation& operator[](int i) const { return observations_[static_cast<std::size_t>(i)]; }
  const std::vector<Observation>& observations() const { return observations_; }

  // u(D): maximum observed objective value.  Requires >= 1 observation.
  double utility() const {
    if (observations_.empty()) throw std::logic_error("Dataset::utility on empty set");
    double u = observations_.front().y;
    for (const auto& o : observations_) u = std::max(u, o.y);
    return u;
  }

  // s(D): total observed cost.
  double total_cost() const { return total_cost_; }

  Eigen::MatrixXd inputs() const {
    Eigen::MatrixXd x(size(), observations_.empty() ? 0 : observations_.front().x.size());
    for (int i = 0; i < size(); ++i) x.row(i) = observations_[static_cast<std::size_t>(i)].x.transpose();
    return x;
  }
  Eigen::VectorXd objectives() const {
    Eigen::VectorXd y(size());
    for (int i = 0; i < size(); ++i) y[i] = observations_[static_cast<std::size_t>(i)].y;
    return y;
  }
  Eigen::VectorXd log_costs() const {
    Eigen::VectorXd z(size());
    for (int i = 0; i < size(); ++i) z[i] = std::log(observations_[static_cast<std::size_t>(i)].z);
    return z;
  }

 private:
  std::vector<Observation> observations_;
  double total_cost_ = 0.0;
};

// Objective GP and log-cost GP bound to one dataset.  The objective targets
// are standardized inside the GP; log-cost targets are modeled raw.
struct SurrogatePair {
  GpModel objective_model;
  GpModel logcost_model;
  Dataset dataset;
};

SurrogatePair refit(const Dataset& dataset, const GpPriorConfig& prior);

struct FantasyResult {
  SurrogatePair pair;
  double y_sample = 0.0;
  double z_sample = 0.0;  // > 0 by construction (exp of a log-cost draw)
};

// Draw (y, z) at x by the reparameterization trick (caller-supplied standard
// normal base samples) and condition both models on the draw, hyperparameters
// frozen.
FantasyResult fantasize(const SurrogatePair& pair, const Eigen::VectorXd& x, double eps_y,
                        double eps_lnz);

}  // namespace budgetbo
