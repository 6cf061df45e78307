#include "xrsched/nets/mlp.hpp"

#include <stdexcept>

namespace xrsched {

namespace {
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatMap = Eigen::Map<const RowMat>;
using MatMap = Eigen::Map<RowMat>;
}  // namespace

int MlpSpec::param_count() const {
  int n = 0;
  for (int l = 0; l < num_layers(); ++l) n += sizes[l + 1] * (sizes[l] + 1);
  return n;
}

int MlpSpec::layer_offset(int l) const {
  int n = 0;
  for (int j = 0; j < l; ++j) n += sizes[j + 1] * (sizes[j] + 1);
  return n;
}

Eigen::VectorXd mlp_forward(const MlpSpec& spec, const Eigen::VectorXd& params,
                            const Eigen::VectorXd& input, MlpWorkspace* ws) {
  if (params.size() != spec.param_count()) {
    throw std::invalid_argument("mlp_forward: parameter vector size mismatch");
  }
  if (input.size() != spec.input_dim()) {
    throw std::invalid_argument("mlp_forward: input size mismatch");
  }
  const int L = spec.num_layers();
  if (ws) {
    ws->act.assign(static_cast<std::size_t>(L) + 1, Eigen::VectorXd());
    ws->act[0] = input;
  }
  Eigen::VectorXd x = input;
  int off = 0;
  for (int l = 0; l < L; ++l) {
    const int in = spec.sizes[l];
    const int out = spec.sizes[l + 1];
    ConstMatMap W(params.data() + off, out, in);
    Eigen::Map<const Eigen::VectorXd> b(params.data() + off + out * in, out);
    Eigen::VectorXd y = W * x + b;
    if (l + 1 < L || spec.tanh_output) y = y.array().tanh();
    if (ws) ws->act[static_cast<std::size_t>(l) + 1] = y;
    x = std::move(y);
    off += out * (in + 1);
  }
  return x;
}

void mlp_backward(const MlpSpec& spec, const Eigen::VectorXd& params,
                  const MlpWorkspace& ws, const Eigen::VectorXd& out_cotangent,
                  Eigen::Ref<Eigen::VectorXd> param_grad, Eigen::VectorXd* input_grad) {
  const int L = spec.num_layers();
  if (static_cast<int>(ws.act.size()) != L + 1) {
    throw std::invalid_argument("mlp_backward: workspace does not match spec");
  }
  if (out_cotangent.size() != spec.output_dim()) {
    throw std::invalid_argument("mlp_backward: cotangent size mismatch");
  }
  if (param_grad.size() != spec.param_count()) {
    throw std::invalid_argument("mlp_backward: gradient vector size mismatch");
  }
  Eigen::VectorXd delta = out_cotangent;  // d/d(pre-activation) of output layer
  for (int l = L - 1; l >= 0; --l) {
    const int in = spec.sizes[l];
    const int out = spec.sizes[l + 1];
    const int off = spec.layer_offset(l);
    if (l < L - 1 || spec.tanh_output) {
      // Chain through tanh: act[l+1] holds tanh(pre).
      delta.array() *= 1.0 - ws.act[static_cast<std::size_t>(l) + 1].array().square();
    }
    MatMap dW(param_grad.data() + off, out, in);
    Eigen::Map<Eigen::VectorXd> db(param_grad.data() + off + out * in, out);
    dW.noalias() += delta * ws.act[static_cast<std::size_t>(l)].transpose();
    db += delta;
    if (l > 0 || input_grad) {
      ConstMatMap W(params.data() + off, out, in);
      Eigen::VectorXd prev = W.transpose() * delta;
      if (l == 0) {
        *input_grad = std::move(prev);
      } else {
        delta = std::move(prev);
      }
    }
  }
}

Eigen::VectorXd mlp_init(const MlpSpec& spec, Rng& rng) {
  Eigen::VectorXd params(spec.param_count());
  int off = 0;
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int in = spec.sizes[l];
    const int out = spec.sizes[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    for (int j = 0; j < out * (in + 1); ++j) params[off + j] = rng.uniform(-bound, bound);
    off += out * (in + 1);
  }
  return params;
}

}  // namespace xrsched
