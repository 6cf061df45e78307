#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "xrsched/env/channel.hpp"
#include "xrsched/env/queue.hpp"
#include "xrsched/env/traffic.hpp"
#include "xrsched/rng.hpp"

namespace xrsched {

struct EnvConfig {
  int num_users = 2;
  std::vector<int> deadlines;        // per-user; empty = all 10
  double slot_seconds = 1e-3;
  double bandwidth_hz = 1e7;
  double noise_dbm_per_hz = -100.0;
  double drop_limit = 0.1;           // allowed dropout rate c_k
  double power_cap = 4.0;            // per-user transmit power ceiling (W)
  double eps_min = 1e-6;
  double eps_max = 1.0;
  double qsi_scale = 1e-4;           // queue-bits feature scaling
  double mean_sojourn_slots = 0.0;   // regime mean duration; <= 0 = stationary
  TrafficRanges traffic;
  ChannelConfig channel;

  void validate() const;
  double noise_power() const;        // W over the whole band
  int deadline(int user) const;
  int action_dim() const { return num_users + 1; }
  int state_dim() const;
};

// Physical action: per-user transmit powers plus the precoder regularizer.
struct Action {
  Eigen::VectorXd power;
  double reg_eps = 1e-6;
};

struct StepResult {
  Eigen::VectorXd rates;           // bit/s per user
  Eigen::VectorXd shifted_costs;   // index 0: total power R (W); k>=1: C_k - c_k
  std::vector<ServiceOutcome> service;
  bool regime_switched = false;
  std::int64_t regime_id = 0;
};

// Downlink simulator: RZF precoding over block flat fading, hard-deadline
// queues and regime-switching arrivals. One step = precode with the current
// channel, serve/age/admit the queues, possibly switch regime, then draw the
// next slot's channel.
class Environment {
 public:
  Environment(EnvConfig cfg, std::uint64_t seed);

  const EnvConfig& config() const { return cfg_; }
  Eigen::VectorXd observe() const;
  StepResult step(const Action& action);

  const Eigen::MatrixXcd& channel() const { return h_; }
  const TrafficRegime& regime() const { return regime_; }
  const std::vector<UserQueue>& queues() const { return queues_; }
  const ChannelModel& channel_model() const { return model_; }

 private:
  EnvConfig cfg_;
  Rng rng_;
  ChannelModel model_;
  Eigen::MatrixXcd h_;
  std::vector<UserQueue> queues_;
  TrafficRegime regime_;
};

}  // namespace xrsched
