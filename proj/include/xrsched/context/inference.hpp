#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "xrsched/context/transition_log.hpp"
#include "xrsched/nets/gaussian.hpp"
#include "xrsched/nets/mlp.hpp"
#include "xrsched/rng.hpp"

namespace xrsched {

// Factor-net geometry: input is one (s, a, s') transition, output stacks the
// factor mean with a pre-softplus variance head.
struct EncoderSpec {
  MlpSpec factor_net;
  int latent_dim = 5;
  double var_floor = 1e-4;

  GaussianFactor factor(const Eigen::VectorXd& psi, const Eigen::VectorXd& input,
                        MlpWorkspace* ws = nullptr) const;
};

enum class ContextMode { kSample, kMean };

struct ContextDraw {
  Eigen::VectorXd z;
  Eigen::VectorXd xi;       // zero in mean mode
  GaussianFactor aggregate;
};

// Aggregates the factor posteriors of the transitions in [window.first,
// window.second) and draws z. Factor outputs are cached in the log under the
// current snapshot; an empty window falls back to the standard prior (so mean
// mode yields z = 0 before any data).
ContextDraw infer_context(TransitionLog& log,
                          std::pair<std::int64_t, std::int64_t> window,
                          const EncoderSpec& spec, const Eigen::VectorXd& psi,
                          ContextMode mode, Rng* rng);

}  // namespace xrsched
