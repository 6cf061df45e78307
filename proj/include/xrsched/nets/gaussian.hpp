#pragma once

#include <Eigen/Dense>
#include <vector>

namespace xrsched {

// Diagonal Gaussian with variance parameterization (var, not stddev).
struct GaussianFactor {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
};

// Cotangents flowing into a factor's (mean, var) during backprop.
struct GaussianCotangent {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
};

// Precision-weighted product of Gaussian factors:
//   agg.var  = (sum_j 1/var_j)^-1
//   agg.mean = agg.var * sum_j mean_j / var_j
// Zero factors aggregate to the standard prior N(0, I) of dimension `dim`.
GaussianFactor gaussian_product_aggregate(const std::vector<GaussianFactor>& factors,
                                          int dim);

// z = mean + xi .* sqrt(var)
Eigen::VectorXd reparam_sample(const GaussianFactor& agg, const Eigen::VectorXd& xi);

// Pathwise partials of reparam_sample: dz/d(mean) = 1 elementwise,
// dz/d(var) = xi / (2 sqrt(var)).
Eigen::VectorXd reparam_var_grad(const GaussianFactor& agg, const Eigen::VectorXd& xi);

// Adjoint of gaussian_product_aggregate: distributes cotangents on the
// aggregate's (mean, var) to each factor's (mean, var). `out` must hold one
// entry per factor, sized like the factor; contributions are accumulated.
void aggregate_backward(const std::vector<GaussianFactor>& factors,
                        const GaussianFactor& agg, const Eigen::VectorXd& mean_cot,
                        const Eigen::VectorXd& var_cot,
                        std::vector<GaussianCotangent>& out);

}  // namespace xrsched
