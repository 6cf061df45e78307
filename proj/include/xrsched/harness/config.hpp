#pragma once

#include <string>

#include "xrsched/cssca/schedule.hpp"
#include "xrsched/env/environment.hpp"

namespace xrsched {

// Which pieces of the agent are active:
//  - kCacrl:      context inference in the state, cost reshaping on, encoder
//                 and potential heads both trained.
//  - kCacrlMinus: context inference in the state, reshaping off; potential
//                 heads are neither trained nor read.
//  - kCsscaCrl:   no context at all; encoder and potential parameters are
//                 never touched (the agent counts accesses so tests can
//                 assert this).
enum class Variant { kCacrl, kCacrlMinus, kCsscaCrl };

Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);

struct ExperimentConfig {
  EnvConfig env;
  StepSchedule schedule;

  // Training geometry.
  int iterations = 300;
  int batch_size = 200;        // slots collected per iteration
  int critic_steps = 10;       // mini-batch passes per iteration
  int context_window = 20;     // transitions aggregated per context draw
  int num_action_samples = 8;  // policy draws behind each potential target
  int pretrain_iterations = 0; // iterations with the actor update skipped
  bool freeze_encoder = false;
  bool freeze_potentials = false;

  // Network shapes.
  int latent_dim = 5;
  int policy_hidden = 64;
  int factor_hidden = 64;
  int trunk_width = 64;
  int head_width = 32;

  // Policy-update subproblem.
  double theta_lo = -10.0;
  double theta_hi = 10.0;
  double zeta = 1.0;
  double subproblem_tol = 1e-6;
  int subproblem_max_iters = 5000;

  // Bookkeeping.
  int eval_interval = 50;
  int eval_slots = 10000;
  int checkpoint_interval = 100;
  int metrics_window = 10;     // iterations behind the windowed packet-drop column
  bool exact_kl = true;
  bool relaxed_schedule = false;

  void validate() const;
};

// Scenario presets for the traffic parameter ranges ("short", "medium",
// "large": rising packet sizes, falling arrival probability).
void apply_traffic_preset(ExperimentConfig& cfg, const std::string& name);

// Historical step-size exponents and the truncated KL gradient, for
// comparison runs against the original settings.
void apply_strict_paper(ExperimentConfig& cfg);

// Flat key=value file ('#' comments, blank lines ignored). Unknown keys
// throw. apply_key is exposed so command-line overrides share the parser.
ExperimentConfig load_config(const std::string& path);
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// env with a lone deadline entry broadcast to every user (the env.deadline
// key stores one value regardless of key order relative to env.num_users).
EnvConfig resolve_env(const ExperimentConfig& cfg);

}  // namespace xrsched
