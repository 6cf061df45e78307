#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace xrsched {

// One collected timeslot transition, with everything the critic, encoder and
// actor updates need later: augmented states (base features plus inferred
// context when the variant uses one), the physical action (network input),
// the raw pre-squash draw (score input), shifted costs C'_k and their
// reshaped version, and the reparameterization noise plus transition-log
// window behind this tuple's context draw.
struct ObservationTuple {
  Eigen::VectorXd state;
  Eigen::VectorXd next_state;
  Eigen::VectorXd action;
  Eigen::VectorXd action_raw;
  Eigen::VectorXd costs;           // k = 0..K, index 0 is the power objective
  Eigen::VectorXd reshaped_costs;  // equals costs when shaping is off
  Eigen::VectorXd xi;              // empty when the variant carries no context
  std::int64_t window_begin = 0;
  std::int64_t window_end = 0;
};

// B tuples plus the fixed partition into contiguous, disjoint, covering
// critic mini-batches.
struct IterationBatch {
  std::vector<ObservationTuple> tuples;
  int minibatches = 1;

  std::pair<int, int> minibatch_range(int j) const {
    const int b = static_cast<int>(tuples.size());
    return {j * b / minibatches, (j + 1) * b / minibatches};
  }
};

}  // namespace xrsched
