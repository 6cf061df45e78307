#pragma once

#include <Eigen/Dense>
#include <vector>

namespace xrsched {

// Convex quadratic surrogates around the anchor point:
//   f_bar_k(theta) = f_hat_k + g_hat_k^T (theta - anchor) + zeta_k |theta - anchor|^2
// Index 0 is the objective, 1..K the constraints.
struct SurrogateSet {
  Eigen::VectorXd anchor;
  Eigen::VectorXd f_hat;                 // K+1
  std::vector<Eigen::VectorXd> g_hat;    // K+1 vectors, each anchor-sized
  Eigen::VectorXd zeta;                  // K+1, strictly positive

  int num_constraints() const { return static_cast<int>(f_hat.size()) - 1; }
  double value(int k, const Eigen::VectorXd& theta) const;
  Eigen::VectorXd grad(int k, const Eigen::VectorXd& theta) const;
  void validate() const;
};

SurrogateSet build_surrogates(Eigen::VectorXd anchor, Eigen::VectorXd f_hat,
                              std::vector<Eigen::VectorXd> g_hat,
                              Eigen::VectorXd zeta);

}  // namespace xrsched
