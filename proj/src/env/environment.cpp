#include "xrsched/env/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace xrsched {

void EnvConfig::validate() const {
  if (num_users < 1) throw std::invalid_argument("env: num_users must be >= 1");
  if (!deadlines.empty() && static_cast<int>(deadlines.size()) != num_users) {
    throw std::invalid_argument("env: deadlines must be empty or one per user");
  }
  for (int d : deadlines) {
    if (d < 1) throw std::invalid_argument("env: deadlines must be >= 1");
  }
  if (!(slot_seconds > 0.0) || !(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("env: slot length and bandwidth must be positive");
  }
  if (!(drop_limit > 0.0 && drop_limit < 1.0)) {
    throw std::invalid_argument("env: drop limit must lie in (0,1)");
  }
  if (!(power_cap > 0.0)) throw std::invalid_argument("env: power cap must be positive");
  if (!(eps_min > 0.0 && eps_min < eps_max)) {
    throw std::invalid_argument("env: need 0 < eps_min < eps_max");
  }
}

double EnvConfig::noise_power() const {
  return std::pow(10.0, noise_dbm_per_hz / 10.0) * 1e-3 * bandwidth_hz;
}

int EnvConfig::deadline(int user) const {
  if (deadlines.empty()) return 10;
  return deadlines[static_cast<std::size_t>(user)];
}

int EnvConfig::state_dim() const {
  int total_slots = 0;
  for (int k = 0; k < num_users; ++k) total_slots += deadline(k);
  return 2 * total_slots + 2 * num_users * channel.num_antennas;
}

Environment::Environment(EnvConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), rng_(seed),
      model_(cfg_.num_users, cfg_.channel, rng_) {
  cfg_.validate();
  for (int k = 0; k < cfg_.num_users; ++k) queues_.emplace_back(cfg_.deadline(k));
  regime_ = sample_regime(cfg_.traffic, cfg_.num_users, 0, rng_);
  h_ = model_.generate(rng_);
}

Eigen::VectorXd Environment::observe() const {
  Eigen::VectorXd s(cfg_.state_dim());
  int pos = 0;
  for (const auto& q : queues_) {
    for (const auto& slot : q.slots) {
      s[pos++] = static_cast<double>(slot.size_bits) * cfg_.qsi_scale;
    }
    for (const auto& slot : q.slots) {
      s[pos++] = static_cast<double>(slot.remaining_bits) * cfg_.qsi_scale;
    }
  }
  for (int k = 0; k < cfg_.num_users; ++k) {
    for (int m = 0; m < cfg_.channel.num_antennas; ++m) s[pos++] = h_(k, m).real();
  }
  for (int k = 0; k < cfg_.num_users; ++k) {
    for (int m = 0; m < cfg_.channel.num_antennas; ++m) s[pos++] = h_(k, m).imag();
  }
  return s;
}

StepResult Environment::step(const Action& action) {
  const int k = cfg_.num_users;
  if (action.power.size() != k) {
    throw std::invalid_argument("env: power vector size mismatch");
  }
  for (int i = 0; i < k; ++i) {
    if (!(action.power[i] >= 0.0) || !(action.power[i] <= cfg_.power_cap)) {
      throw std::invalid_argument("env: power outside [0, power_cap]");
    }
  }
  if (!(action.reg_eps >= cfg_.eps_min && action.reg_eps <= cfg_.eps_max)) {
    throw std::invalid_argument("env: regularizer outside [eps_min, eps_max]");
  }

  StepResult out;
  const Eigen::MatrixXcd v = rzf_precoder(h_, action.reg_eps);
  out.rates = compute_rates(h_, v, action.power, cfg_.noise_power(), cfg_.bandwidth_hz);

  out.service.resize(static_cast<std::size_t>(k));
  out.shifted_costs.resize(k + 1);
  out.shifted_costs[0] = action.power.sum();
  for (int i = 0; i < k; ++i) {
    const auto budget =
        static_cast<std::int64_t>(std::floor(cfg_.slot_seconds * out.rates[i]));
    const std::int64_t arrival = draw_arrival_bits(regime_, i, rng_);
    out.service[static_cast<std::size_t>(i)] =
        queue_step(queues_[static_cast<std::size_t>(i)], budget, arrival);
    const double c = out.service[static_cast<std::size_t>(i)].dropout ? 1.0 : 0.0;
    out.shifted_costs[i + 1] = c - cfg_.drop_limit;
  }

  out.regime_switched =
      traffic_process_step(regime_, cfg_.traffic, cfg_.mean_sojourn_slots, rng_);
  out.regime_id = regime_.regime_id;
  h_ = model_.generate(rng_);
  return out;
}

}  // namespace xrsched
