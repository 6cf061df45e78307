#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <deque>
#include <utility>
#include <vector>

#include "xrsched/context/inference.hpp"
#include "xrsched/context/transition_log.hpp"
#include "xrsched/cssca/batch.hpp"
#include "xrsched/env/environment.hpp"
#include "xrsched/harness/config.hpp"
#include "xrsched/nets/checkpoint.hpp"
#include "xrsched/nets/dual_head.hpp"
#include "xrsched/nets/policy.hpp"

namespace xrsched {

// One training iteration's trace; the runner flattens it into metrics.csv.
struct IterationRecord {
  std::int64_t iteration = 0;
  // 'o' objective step, 'f' feasible step, 'x' feasible fallback after the
  // objective solve failed to converge, 'p' pretraining (no policy step).
  char branch = 'o';
  int dual_iterations = 0;
  double mu = 0.0, eta = 0.0, upsilon = 0.0;
  Eigen::VectorXd f_hat;             // K+1 running surrogate cost values
  double mean_power = 0.0;           // batch mean of the raw power objective (W)
  Eigen::VectorXd batch_drop;        // per-user share of batch slots with an expiry loss
  Eigen::VectorXd window_drop;       // per-user dropped/exited packets over the last
                                     // metrics_window iterations
  double max_violation = 0.0;        // max over constraints of f_hat_k
  bool surrogate_feasible = true;    // objective subproblem accepted the surrogates
  std::int64_t regime_id = 0;        // traffic regime at the end of the batch
  double encoder_kl = 0.0;           // mean KL to prior over the last encoder pass
  double potential_error = 0.0;      // mean |V - target| over the last potential pass
  Eigen::VectorXd critic_residuals;  // K+1 mean |TD residual| over the last pass
  Eigen::VectorXd shaping;           // K batch-mean applied potential differences
  std::uint64_t policy_checksum = 0; // FNV over theta at collection time
};

struct EvalRecord {
  std::int64_t iteration = 0;
  int slots = 0;
  double mean_power = 0.0;
  Eigen::VectorXd slot_drop;    // per-user share of slots with an expiry loss
  Eigen::VectorXd packet_drop;  // per-user dropped/exited packets
};

// The training loop's moving parts: environment, squashed Gaussian policy,
// one dual-head critic per cost, the context encoder, the transition log and
// the recursive surrogate statistics. run_iteration() collects a batch,
// sweeps the critic mini-batches (TD step per cost, then encoder, then
// potential heads, sharing each mini-batch's successor draws), refreshes the
// recursive cost/gradient averages and takes one constrained policy step.
class Agent {
 public:
  Agent(const ExperimentConfig& cfg, Variant variant, std::uint64_t seed);

  IterationRecord run_iteration();

  // Frozen-policy rollout on a fresh environment fork. Training state is
  // untouched; records under the same eval_index reproduce byte for byte.
  EvalRecord evaluate(int eval_index, int slots) const;

  std::int64_t iteration() const { return iteration_; }
  Variant variant() const { return variant_; }
  int num_users() const { return num_users_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::VectorXd& psi() const { return psi_; }
  const std::vector<Eigen::VectorXd>& critic_params() const { return qparams_; }
  const Eigen::VectorXd& f_hat() const { return f_hat_; }
  const GaussianPolicy& policy() const { return policy_; }
  const DualHeadNet& critic() const { return critic_; }
  const EncoderSpec& encoder() const { return encoder_; }

  // Times encoder / potential parameters were read or written since
  // construction. The no-context variant must keep both at zero; the
  // no-shaping variant keeps the potential counter at zero.
  std::int64_t encoder_accesses() const { return encoder_accesses_; }
  std::int64_t potential_accesses() const { return potential_accesses_; }

  std::vector<CheckpointEntry> snapshot() const;
  void restore(const std::vector<CheckpointEntry>& entries);

 private:
  bool uses_context() const { return variant_ != Variant::kCsscaCrl; }
  bool uses_shaping() const { return variant_ == Variant::kCacrl; }
  int state_dim() const;
  Eigen::VectorXd augment(const Eigen::VectorXd& base, const Eigen::VectorXd& z) const;
  Eigen::VectorXd encoder_input(const Eigen::VectorXd& obs, const Eigen::VectorXd& action,
                                const Eigen::VectorXd& next_obs) const;
  std::pair<std::int64_t, std::int64_t> context_window() const;
  Action to_action(const Eigen::VectorXd& flat) const;

  IterationBatch collect_batch(IterationRecord& rec);
  void critic_phase(const IterationBatch& batch, double eta, double upsilon,
                    IterationRecord& rec);
  void actor_phase(double mu, IterationRecord& rec);

  ExperimentConfig cfg_;
  Variant variant_;
  int num_users_;
  int base_dim_;

  Environment env_;
  GaussianPolicy policy_;
  Eigen::VectorXd theta_;
  DualHeadNet critic_;
  std::vector<Eigen::VectorXd> qparams_;  // K+1 flat dual-head vectors
  EncoderSpec encoder_;
  Eigen::VectorXd psi_;
  TransitionLog log_;

  Eigen::VectorXd f_hat_;               // K+1 recursive cost averages
  std::vector<Eigen::VectorXd> g_hat_;  // K+1 recursive gradient averages

  Rng root_;
  Rng policy_rng_, critic_rng_, encoder_rng_;

  std::int64_t iteration_ = 0;
  Eigen::VectorXd cur_obs_;   // base observation entering the next slot
  ContextDraw cur_draw_;      // context attached to the next slot's state
  std::pair<std::int64_t, std::int64_t> cur_window_{0, 0};

  // (dropped, exited) packet counts per iteration for the windowed diagnostic.
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> drop_history_;

  mutable std::int64_t encoder_accesses_ = 0;
  mutable std::int64_t potential_accesses_ = 0;
};

}  // namespace xrsched
