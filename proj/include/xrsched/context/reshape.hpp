#pragma once

#include <Eigen/Dense>
#include <vector>

#include "xrsched/nets/dual_head.hpp"

namespace xrsched {

// Potential-difference shaping of the constraint costs:
//   reshaped_k = cost_k + V_k(next_state) - V_k(state)   for k = 1..K
// with the objective cost (k = 0) passed through untouched. params holds the
// dual-head parameter vector per k (index 0 present but unused). If
// shaping_out is given it receives the K applied differences.
Eigen::VectorXd reshape_costs(const Eigen::VectorXd& costs,
                              const Eigen::VectorXd& state,
                              const Eigen::VectorXd& next_state,
                              const DualHeadNet& net,
                              const std::vector<Eigen::VectorXd>& params,
                              Eigen::VectorXd* shaping_out = nullptr);

}  // namespace xrsched
