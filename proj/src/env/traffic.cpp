#include "xrsched/env/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace xrsched {

namespace {

void validate(const TrafficRanges& r) {
  if (!(r.prob_min > 0.0) || !(r.prob_max < 1.0) || !(r.prob_min <= r.prob_max)) {
    throw std::invalid_argument("traffic: arrival probability range must lie in (0,1)");
  }
  if (!(r.mean_bits_min > 0.0) || !(r.mean_bits_min <= r.mean_bits_max)) {
    throw std::invalid_argument("traffic: mean packet length range must be positive");
  }
}

}  // namespace

TrafficRegime sample_regime(const TrafficRanges& ranges, int num_users,
                            std::int64_t regime_id, Rng& rng) {
  validate(ranges);
  if (num_users < 1) throw std::invalid_argument("traffic: num_users must be >= 1");
  TrafficRegime regime;
  regime.arrival_prob.resize(num_users);
  regime.mean_packet_bits.resize(num_users);
  for (int k = 0; k < num_users; ++k) {
    regime.arrival_prob[k] = rng.uniform(ranges.prob_min, ranges.prob_max);
    regime.mean_packet_bits[k] = rng.uniform(ranges.mean_bits_min, ranges.mean_bits_max);
  }
  regime.regime_id = regime_id;
  return regime;
}

bool traffic_process_step(TrafficRegime& regime, const TrafficRanges& ranges,
                          double mean_sojourn_slots, Rng& rng) {
  if (!(mean_sojourn_slots > 0.0) || std::isinf(mean_sojourn_slots)) return false;
  if (!rng.bernoulli(1.0 / mean_sojourn_slots)) return false;
  regime = sample_regime(ranges, static_cast<int>(regime.arrival_prob.size()),
                         regime.regime_id + 1, rng);
  return true;
}

std::int64_t draw_arrival_bits(const TrafficRegime& regime, int user, Rng& rng) {
  if (user < 0 || user >= regime.arrival_prob.size()) {
    throw std::invalid_argument("traffic: user index out of range");
  }
  if (!rng.bernoulli(regime.arrival_prob[user])) return 0;
  return rng.poisson(regime.mean_packet_bits[user]);
}

}  // namespace xrsched
