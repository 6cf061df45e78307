#pragma once

#include <Eigen/Dense>
#include <vector>

#include "xrsched/context/inference.hpp"
#include "xrsched/context/transition_log.hpp"
#include "xrsched/cssca/batch.hpp"
#include "xrsched/nets/dual_head.hpp"

namespace xrsched {

struct EncoderUpdateStats {
  double mean_kl = 0.0;
};

// One ELBO step over critic mini-batch j. Each tuple's constraint-critic
// Bellman residuals (bootstrap target fixed, critics k = 1..K) flow through
// the pathwise graph of its stored z draw - rebuilt at the current psi with
// the stored xi - and the KL-to-prior gradient is added on top (exact_kl
// false selects the truncated historical form). Factor forwards are shared
// across the overlapping context windows; each distinct transition receives
// one backward pass with its accumulated cotangent. Requires stored xi in
// every tuple; successor_actions must match the mini-batch and be the same
// draws the TD pass used.
EncoderUpdateStats encoder_update(const EncoderSpec& spec, Eigen::VectorXd& psi,
                                  const TransitionLog& log, const IterationBatch& batch,
                                  int minibatch_index,
                                  const std::vector<Eigen::VectorXd>& successor_actions,
                                  const DualHeadNet& net,
                                  const std::vector<Eigen::VectorXd>& qparams,
                                  const Eigen::VectorXd& f_hat, double upsilon,
                                  bool exact_kl = true);

}  // namespace xrsched
