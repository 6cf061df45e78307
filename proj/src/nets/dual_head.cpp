#include "xrsched/nets/dual_head.hpp"

#include <stdexcept>

namespace xrsched {

DualHeadNet::DualHeadNet(int state_dim, int action_dim, int trunk_width, int head_width)
    : action_dim_(action_dim) {
  trunk_.sizes = {state_dim, trunk_width, trunk_width};
  trunk_.tanh_output = true;
  q_head_.sizes = {trunk_width + action_dim, head_width, 1};
  v_head_.sizes = {trunk_width, head_width, 1};
}

int DualHeadNet::param_count() const {
  return trunk_.param_count() + q_head_.param_count() + v_head_.param_count();
}

Eigen::VectorXd DualHeadNet::init(Rng& rng) const {
  Eigen::VectorXd p(param_count());
  p.head(trunk_.param_count()) = mlp_init(trunk_, rng);
  p.segment(trunk_.param_count(), q_head_.param_count()) = mlp_init(q_head_, rng);
  p.tail(v_head_.param_count()) = mlp_init(v_head_, rng);
  return p;
}

double DualHeadNet::q_value(const Eigen::VectorXd& params, const Eigen::VectorXd& state,
                            const Eigen::VectorXd& action, QWorkspace* ws) const {
  if (params.size() != param_count()) {
    throw std::invalid_argument("dual head: parameter vector size mismatch");
  }
  if (action.size() != action_dim_) {
    throw std::invalid_argument("dual head: action size mismatch");
  }
  QWorkspace local;
  QWorkspace& w = ws ? *ws : local;
  const Eigen::VectorXd feat =
      mlp_forward(trunk_, params.head(trunk_.param_count()), state, &w.trunk);
  w.head_in.resize(feat.size() + action.size());
  w.head_in << feat, action;
  const Eigen::VectorXd q = mlp_forward(
      q_head_, params.segment(trunk_.param_count(), q_head_.param_count()), w.head_in,
      &w.head);
  return q[0];
}

double DualHeadNet::v_value(const Eigen::VectorXd& params, const Eigen::VectorXd& state,
                            VWorkspace* ws) const {
  if (params.size() != param_count()) {
    throw std::invalid_argument("dual head: parameter vector size mismatch");
  }
  VWorkspace local;
  VWorkspace& w = ws ? *ws : local;
  const Eigen::VectorXd feat =
      mlp_forward(trunk_, params.head(trunk_.param_count()), state, &w.trunk);
  const Eigen::VectorXd v =
      mlp_forward(v_head_, params.tail(v_head_.param_count()), feat, &w.head);
  return v[0];
}

void DualHeadNet::q_backward(const Eigen::VectorXd& params, const QWorkspace& ws,
                             double cot, Eigen::Ref<Eigen::VectorXd> param_grad,
                             Eigen::VectorXd* state_grad) const {
  const int nt = trunk_.param_count();
  const int nq = q_head_.param_count();
  Eigen::VectorXd cot_vec(1);
  cot_vec[0] = cot;
  Eigen::VectorXd head_in_grad;
  mlp_backward(q_head_, params.segment(nt, nq), ws.head, cot_vec,
               param_grad.segment(nt, nq), &head_in_grad);
  const int fw = trunk_.output_dim();
  Eigen::VectorXd feat_cot = head_in_grad.head(fw);
  mlp_backward(trunk_, params.head(nt), ws.trunk, feat_cot, param_grad.head(nt),
               state_grad);
}

void DualHeadNet::v_backward(const Eigen::VectorXd& params, const VWorkspace& ws,
                             double cot, Eigen::Ref<Eigen::VectorXd> param_grad,
                             Eigen::VectorXd* state_grad) const {
  const int nt = trunk_.param_count();
  const int nq = q_head_.param_count();
  const int nv = v_head_.param_count();
  Eigen::VectorXd cot_vec(1);
  cot_vec[0] = cot;
  Eigen::VectorXd feat_cot;
  mlp_backward(v_head_, params.tail(nv), ws.head, cot_vec,
               param_grad.segment(nt + nq, nv), &feat_cot);
  mlp_backward(trunk_, params.head(nt), ws.trunk, feat_cot, param_grad.head(nt),
               state_grad);
}

}  // namespace xrsched
