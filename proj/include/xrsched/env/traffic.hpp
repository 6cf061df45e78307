#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "xrsched/rng.hpp"

namespace xrsched {

// Uniform ranges the regime parameters are drawn from (one of the scenario
// presets, or custom).
struct TrafficRanges {
  double prob_min = 0.4;
  double prob_max = 0.6;
  double mean_bits_min = 10000.0;
  double mean_bits_max = 15000.0;
};

// Latent traffic state: per-user arrival probability and mean packet length.
struct TrafficRegime {
  Eigen::ArrayXd arrival_prob;
  Eigen::ArrayXd mean_packet_bits;
  std::int64_t regime_id = 0;
};

TrafficRegime sample_regime(const TrafficRanges& ranges, int num_users,
                            std::int64_t regime_id, Rng& rng);

// Geometric-sojourn regime switching: with probability 1/mean_sojourn_slots
// the regime parameters are resampled and the id increments. A non-positive
// or infinite mean sojourn means stationary traffic. Returns true on a switch.
bool traffic_process_step(TrafficRegime& regime, const TrafficRanges& ranges,
                          double mean_sojourn_slots, Rng& rng);

// Bernoulli(P_k) arrival with Poisson(lambda_k) integer length; 0 = no packet.
std::int64_t draw_arrival_bits(const TrafficRegime& regime, int user, Rng& rng);

}  // namespace xrsched
