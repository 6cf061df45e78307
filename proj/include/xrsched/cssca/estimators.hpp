#pragma once

#include <Eigen/Dense>
#include <vector>

#include "xrsched/cssca/batch.hpp"
#include "xrsched/nets/dual_head.hpp"
#include "xrsched/nets/policy.hpp"
#include "xrsched/rng.hpp"

namespace xrsched {

// Batch mean of the reshaped shifted costs, one entry per k = 0..K.
Eigen::VectorXd estimate_cost_means(const IterationBatch& batch);

// Recursive average x' = (1 - eta) x + eta sample, same eta on both terms.
double update_average(double prev, double sample, double eta);
Eigen::VectorXd update_average(const Eigen::VectorXd& prev,
                               const Eigen::VectorXd& sample, double eta);

struct TdStats {
  double mean_abs_residual = 0.0;
};

// One semi-gradient TD pass over mini-batch j for cost index k: residuals
// Q(s_t, a_t) - cost_k + f_hat_k - Q(s_{t+1}, a'_{t+1}) weight the gradient of
// Q at (s_t, a_t); the bootstrap target is held fixed. successor_actions must
// hold one fresh policy draw per tuple of the mini-batch (shared with the
// other per-mini-batch updates so they see the same residuals). Updates
// qparams in place.
TdStats td_critic_update(const DualHeadNet& net, Eigen::VectorXd& qparams,
                         const IterationBatch& batch, int minibatch_index,
                         const std::vector<Eigen::VectorXd>& successor_actions,
                         int cost_index, double f_hat, double upsilon);

// Policy-gradient estimate per k: batch mean of Q_k(s_t, a_t) * score(a_t).
std::vector<Eigen::VectorXd> estimate_policy_grads(
    const IterationBatch& batch, const GaussianPolicy& policy,
    const Eigen::VectorXd& theta, const DualHeadNet& net,
    const std::vector<Eigen::VectorXd>& qparams);

}  // namespace xrsched
