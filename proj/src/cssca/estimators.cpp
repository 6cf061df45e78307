#include "xrsched/cssca/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace xrsched {

Eigen::VectorXd estimate_cost_means(const IterationBatch& batch) {
  if (batch.tuples.empty()) throw std::invalid_argument("estimators: empty batch");
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(batch.tuples.front().reshaped_costs.size());
  for (const auto& t : batch.tuples) mean += t.reshaped_costs;
  return mean / static_cast<double>(batch.tuples.size());
}

double update_average(double prev, double sample, double eta) {
  return (1.0 - eta) * prev + eta * sample;
}

Eigen::VectorXd update_average(const Eigen::VectorXd& prev,
                               const Eigen::VectorXd& sample, double eta) {
  return (1.0 - eta) * prev + eta * sample;
}

TdStats td_critic_update(const DualHeadNet& net, Eigen::VectorXd& qparams,
                         const IterationBatch& batch, int minibatch_index,
                         const std::vector<Eigen::VectorXd>& successor_actions,
                         int cost_index, double f_hat, double upsilon) {
  const auto [begin, end] = batch.minibatch_range(minibatch_index);
  if (end <= begin) throw std::invalid_argument("td: empty mini-batch");
  if (static_cast<int>(successor_actions.size()) != end - begin) {
    throw std::invalid_argument("td: successor action count mismatch");
  }
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(qparams.size());
  TdStats stats;
  for (int t = begin; t < end; ++t) {
    const auto& tup = batch.tuples[static_cast<std::size_t>(t)];
    DualHeadNet::QWorkspace ws;
    const double q = net.q_value(qparams, tup.state, tup.action, &ws);
    const double q_next = net.q_value(
        qparams, tup.next_state, successor_actions[static_cast<std::size_t>(t - begin)]);
    const double residual = q - tup.reshaped_costs[cost_index] + f_hat - q_next;
    stats.mean_abs_residual += std::abs(residual);
    net.q_backward(qparams, ws, residual, grad);
  }
  stats.mean_abs_residual /= static_cast<double>(end - begin);
  qparams -= upsilon * grad;
  return stats;
}

std::vector<Eigen::VectorXd> estimate_policy_grads(
    const IterationBatch& batch, const GaussianPolicy& policy,
    const Eigen::VectorXd& theta, const DualHeadNet& net,
    const std::vector<Eigen::VectorXd>& qparams) {
  if (batch.tuples.empty()) throw std::invalid_argument("estimators: empty batch");
  std::vector<Eigen::VectorXd> grads(qparams.size(),
                                     Eigen::VectorXd::Zero(theta.size()));
  for (const auto& tup : batch.tuples) {
    const Eigen::VectorXd score = policy.log_prob_grad(theta, tup.state, tup.action_raw);
    for (std::size_t k = 0; k < qparams.size(); ++k) {
      const double q = net.q_value(qparams[k], tup.state, tup.action);
      grads[k] += q * score;
    }
  }
  for (auto& g : grads) g /= static_cast<double>(batch.tuples.size());
  return grads;
}

}  // namespace xrsched
