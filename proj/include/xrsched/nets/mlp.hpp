#pragma once

#include <Eigen/Dense>
#include <vector>

#include "xrsched/rng.hpp"

namespace xrsched {

// Fully connected net: affine layers with tanh on hidden layers and a
// linear output layer. Parameters live in one flat vector per network,
// laid out layer by layer as [W row-major (out x in), b]. The flat
// layout is what the CSSCA subproblems, the checkpoint format and the
// finite-difference tests all operate on.
struct MlpSpec {
  std::vector<int> sizes;       // [in, hidden..., out]
  bool tanh_output = false;     // tanh on the last layer too (trunk use)

  int input_dim() const { return sizes.front(); }
  int output_dim() const { return sizes.back(); }
  int num_layers() const { return static_cast<int>(sizes.size()) - 1; }
  int param_count() const;
  // Offset of layer l's weight block inside the flat vector.
  int layer_offset(int l) const;
};

// Forward-pass activations kept for the backward pass.
struct MlpWorkspace {
  std::vector<Eigen::VectorXd> act;  // act[0] = input, act[l] = layer l output
};

Eigen::VectorXd mlp_forward(const MlpSpec& spec, const Eigen::VectorXd& params,
                            const Eigen::VectorXd& input, MlpWorkspace* ws = nullptr);

// Accumulates d(out_cotangent . output)/d(params) into param_grad (which must
// be param_count long; contents are added to, not replaced). If input_grad is
// non-null it receives the gradient with respect to the input vector.
void mlp_backward(const MlpSpec& spec, const Eigen::VectorXd& params,
                  const MlpWorkspace& ws, const Eigen::VectorXd& out_cotangent,
                  Eigen::Ref<Eigen::VectorXd> param_grad,
                  Eigen::VectorXd* input_grad = nullptr);

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) per layer.
Eigen::VectorXd mlp_init(const MlpSpec& spec, Rng& rng);

}  // namespace xrsched
