#pragma once

#include <Eigen/Dense>

#include "xrsched/nets/mlp.hpp"
#include "xrsched/rng.hpp"

namespace xrsched {

struct PolicySample {
  Eigen::VectorXd raw;     // pre-squash Gaussian draw g
  Eigen::VectorXd action;  // squashed physical action
  double log_prob = 0.0;   // density of g, i.e. in raw space
};

// Diagonal Gaussian policy. One net produces 2*n_a outputs: the first n_a are
// the mean, the last n_a pass through softplus (+ floor) to give the stddev.
// The physical action is an elementwise affine sigmoid of the raw draw, so it
// always lies in [lo, hi]; log densities and score gradients are defined on
// the raw draw, which callers must store alongside the action.
class GaussianPolicy {
 public:
  GaussianPolicy(MlpSpec net, Eigen::VectorXd lo, Eigen::VectorXd hi,
                 double sigma_floor = 1e-4);

  int action_dim() const { return static_cast<int>(lo_.size()); }
  int param_count() const { return net_.param_count(); }
  const MlpSpec& net() const { return net_; }
  const Eigen::VectorXd& lower() const { return lo_; }
  const Eigen::VectorXd& upper() const { return hi_; }

  PolicySample sample(const Eigen::VectorXd& params, const Eigen::VectorXd& state,
                      Rng& rng) const;
  Eigen::VectorXd squash(const Eigen::VectorXd& raw) const;
  // Squashed mean of the raw Gaussian (deterministic action).
  Eigen::VectorXd mean_action(const Eigen::VectorXd& params,
                              const Eigen::VectorXd& state) const;

  double log_prob(const Eigen::VectorXd& params, const Eigen::VectorXd& state,
                  const Eigen::VectorXd& raw) const;
  Eigen::VectorXd log_prob_grad(const Eigen::VectorXd& params,
                                const Eigen::VectorXd& state,
                                const Eigen::VectorXd& raw) const;

 private:
  void heads(const Eigen::VectorXd& params, const Eigen::VectorXd& state,
             MlpWorkspace* ws, Eigen::VectorXd& mu, Eigen::VectorXd& sigma,
             Eigen::VectorXd& pre_sigma) const;

  MlpSpec net_;
  Eigen::VectorXd lo_, hi_;
  double sigma_floor_;
};

double softplus(double x);
double sigmoid(double x);

}  // namespace xrsched
