#include "xrsched/context/reshape.hpp"

#include <stdexcept>

namespace xrsched {

Eigen::VectorXd reshape_costs(const Eigen::VectorXd& costs,
                              const Eigen::VectorXd& state,
                              const Eigen::VectorXd& next_state,
                              const DualHeadNet& net,
                              const std::vector<Eigen::VectorXd>& params,
                              Eigen::VectorXd* shaping_out) {
  const int num_k = static_cast<int>(costs.size()) - 1;
  if (static_cast<int>(params.size()) != num_k + 1) {
    throw std::invalid_argument("reshape: one parameter vector per cost index");
  }
  Eigen::VectorXd reshaped = costs;
  if (shaping_out) shaping_out->setZero(num_k);
  for (int k = 1; k <= num_k; ++k) {
    const auto& p = params[static_cast<std::size_t>(k)];
    const double shaping = net.v_value(p, next_state) - net.v_value(p, state);
    reshaped[k] += shaping;
    if (shaping_out) (*shaping_out)[k - 1] = shaping;
  }
  return reshaped;
}

}  // namespace xrsched
