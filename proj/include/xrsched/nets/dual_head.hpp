#pragma once

#include <Eigen/Dense>

#include "xrsched/nets/mlp.hpp"

namespace xrsched {

// Action-value / potential pair with a shared tanh trunk over the augmented
// state. The Q head sees [trunk features, action]; the V head sees trunk
// features only. One flat parameter vector per instance, laid out
// [trunk | q_head | v_head]; the TD update touches trunk+q blocks, the
// potential regression touches trunk+v blocks.
class DualHeadNet {
 public:
  DualHeadNet(int state_dim, int action_dim, int trunk_width = 64,
              int head_width = 32);

  int state_dim() const { return trunk_.input_dim(); }
  int action_dim() const { return action_dim_; }
  int param_count() const;
  int trunk_params() const { return trunk_.param_count(); }
  int q_head_params() const { return q_head_.param_count(); }
  int v_head_params() const { return v_head_.param_count(); }

  Eigen::VectorXd init(Rng& rng) const;

  struct QWorkspace {
    MlpWorkspace trunk;
    MlpWorkspace head;
    Eigen::VectorXd head_in;
  };
  struct VWorkspace {
    MlpWorkspace trunk;
    MlpWorkspace head;
  };

  double q_value(const Eigen::VectorXd& params, const Eigen::VectorXd& state,
                 const Eigen::VectorXd& action, QWorkspace* ws = nullptr) const;
  double v_value(const Eigen::VectorXd& params, const Eigen::VectorXd& state,
                 VWorkspace* ws = nullptr) const;

  // Both accumulate cot * dQ/dparams into param_grad (full-length vector);
  // state_grad, if given, receives cot * dQ/d(state input).
  void q_backward(const Eigen::VectorXd& params, const QWorkspace& ws, double cot,
                  Eigen::Ref<Eigen::VectorXd> param_grad,
                  Eigen::VectorXd* state_grad = nullptr) const;
  void v_backward(const Eigen::VectorXd& params, const VWorkspace& ws, double cot,
                  Eigen::Ref<Eigen::VectorXd> param_grad,
                  Eigen::VectorXd* state_grad = nullptr) const;

  const MlpSpec& trunk() const { return trunk_; }

 private:
  MlpSpec trunk_, q_head_, v_head_;
  int action_dim_;
};

}  // namespace xrsched
