#include "xrsched/context/potential_update.hpp"

#include <cmath>
#include <stdexcept>

namespace xrsched {

PotentialStats potential_update(const DualHeadNet& net, Eigen::VectorXd& params,
                                const IterationBatch& batch, int minibatch_index,
                                const GaussianPolicy& policy,
                                const Eigen::VectorXd& theta,
                                int num_action_samples, double upsilon, Rng& rng) {
  if (num_action_samples < 1) {
    throw std::invalid_argument("potential update: need at least one action sample");
  }
  const auto [mb_begin, mb_end] = batch.minibatch_range(minibatch_index);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(params.size());
  PotentialStats stats;
  for (int t = mb_begin; t < mb_end; ++t) {
    const auto& tup = batch.tuples[static_cast<std::size_t>(t)];
    DualHeadNet::VWorkspace ws;
    const double v = net.v_value(params, tup.state, &ws);
    double target = 0.0;
    for (int n = 0; n < num_action_samples; ++n) {
      const PolicySample a = policy.sample(theta, tup.state, rng);
      target += net.q_value(params, tup.state, a.action);
    }
    target /= static_cast<double>(num_action_samples);
    const double err = v - target;
    stats.mean_abs_error += std::abs(err);
    net.v_backward(params, ws, 2.0 * err, grad);
  }
  params -= upsilon * grad;
  stats.mean_abs_error /= static_cast<double>(mb_end - mb_begin);
  return stats;
}

}  // namespace xrsched
