#pragma once

#include <Eigen/Dense>

#include "xrsched/cssca/batch.hpp"
#include "xrsched/nets/dual_head.hpp"
#include "xrsched/nets/policy.hpp"
#include "xrsched/rng.hpp"

namespace xrsched {

struct PotentialStats {
  double mean_abs_error = 0.0;
};

// One regression step of the potential head toward the sampled state value
// target V_hat(s) = (1/N_a) sum_n Q(s, a_n), a_n ~ policy. The target is a
// constant for the step (all evaluations use the parameters as passed in);
// the exact gradient of the squared error drives trunk and V head.
PotentialStats potential_update(const DualHeadNet& net, Eigen::VectorXd& params,
                                const IterationBatch& batch, int minibatch_index,
                                const GaussianPolicy& policy,
                                const Eigen::VectorXd& theta,
                                int num_action_samples, double upsilon, Rng& rng);

}  // namespace xrsched
