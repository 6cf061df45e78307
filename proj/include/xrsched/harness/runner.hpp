#pragma once

#include <cstdint>
#include <string>

#include "xrsched/harness/agent.hpp"
#include "xrsched/harness/config.hpp"

namespace xrsched {

struct RunSummary {
  std::int64_t iterations_completed = 0;
  bool aborted = false;
  std::string abort_reason;
};

// Full training run into out_dir: metrics.csv (one row per iteration),
// eval.csv (frozen-policy rollouts every eval_interval iterations and at the
// end), checkpoints, run.log. metrics.csv, eval.csv, run.log and the
// checkpoints depend only on (config, variant, seed); wall-clock time goes to
// the timing.csv sidecar so reruns stay byte-comparable. An exception out of
// a training iteration is recorded in run.log and ends the run early with the
// state checkpointed; it does not propagate.
RunSummary run_experiment(const ExperimentConfig& cfg, Variant variant,
                          std::uint64_t seed, const std::string& out_dir);

}  // namespace xrsched
