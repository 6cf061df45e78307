#include "xrsched/nets/gaussian.hpp"

#include <stdexcept>

namespace xrsched {

GaussianFactor gaussian_product_aggregate(const std::vector<GaussianFactor>& factors,
                                          int dim) {
  GaussianFactor agg;
  if (factors.empty()) {
    agg.mean = Eigen::VectorXd::Zero(dim);
    agg.var = Eigen::VectorXd::Ones(dim);
    return agg;
  }
  Eigen::ArrayXd precision = Eigen::ArrayXd::Zero(dim);
  Eigen::ArrayXd weighted = Eigen::ArrayXd::Zero(dim);
  for (const auto& f : factors) {
    if (f.mean.size() != dim || f.var.size() != dim) {
      throw std::invalid_argument("aggregate: factor dimension mismatch");
    }
    if ((f.var.array() <= 0.0).any()) {
      throw std::invalid_argument("aggregate: factor variance must be positive");
    }
    precision += f.var.array().inverse();
    weighted += f.mean.array() / f.var.array();
  }
  agg.var = precision.inverse().matrix();
  agg.mean = (agg.var.array() * weighted).matrix();
  return agg;
}

Eigen::VectorXd reparam_sample(const GaussianFactor& agg, const Eigen::VectorXd& xi) {
  return agg.mean + (xi.array() * agg.var.array().sqrt()).matrix();
}

Eigen::VectorXd reparam_var_grad(const GaussianFactor& agg, const Eigen::VectorXd& xi) {
  return (xi.array() / (2.0 * agg.var.array().sqrt())).matrix();
}

void aggregate_backward(const std::vector<GaussianFactor>& factors,
                        const GaussianFactor& agg, const Eigen::VectorXd& mean_cot,
                        const Eigen::VectorXd& var_cot, std::vector<GaussianCotangent>& out) {
  if (out.size() != factors.size()) {
    throw std::invalid_argument("aggregate_backward: output size mismatch");
  }
  // With E_s = agg.var, E_u = agg.mean:
  //   dE_u/du_j   = E_s / v_j
  //   dE_u/dv_j   = E_s (E_u - u_j) / v_j^2     (through both E_s and the sum)
  //   dE_s/dv_j   = E_s^2 / v_j^2
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const auto& f = factors[j];
    const Eigen::ArrayXd inv_v = f.var.array().inverse();
    const Eigen::ArrayXd es = agg.var.array();
    out[j].mean.array() += mean_cot.array() * es * inv_v;
    out[j].var.array() += inv_v.square() *
        (mean_cot.array() * es * (agg.mean.array() - f.mean.array()) +
         var_cot.array() * es.square());
  }
}

}  // namespace xrsched
