#pragma once

#include <Eigen/Dense>
#include <vector>

#include "xrsched/rng.hpp"

namespace xrsched {

struct ChannelConfig {
  int num_antennas = 8;
  int num_paths = 4;
  double gain_db_min = -10.0;
  double gain_db_max = 10.0;
  double angular_spread_deg = 5.0;
};

// Slow per-user geometry, fixed for the lifetime of a scenario: average power
// gain (linear), the per-path variance profile (sums to the gain) and the
// mean departure angle. Fast fading redraws path coefficients and angular
// perturbations every slot.
struct UserGeometry {
  double gain = 1.0;
  Eigen::ArrayXd path_var;
  double mean_aod = 0.0;
};

class ChannelModel {
 public:
  ChannelModel(int num_users, ChannelConfig cfg, Rng& rng);

  // K x M block flat-fading channel; rows are user channels.
  Eigen::MatrixXcd generate(Rng& rng) const;

  int num_users() const { return static_cast<int>(users_.size()); }
  const ChannelConfig& config() const { return cfg_; }
  const std::vector<UserGeometry>& users() const { return users_; }

 private:
  ChannelConfig cfg_;
  std::vector<UserGeometry> users_;
};

// Uniform linear array response [1, e^{-j pi sin}, ..., e^{-j pi (M-1) sin}].
Eigen::VectorXcd ula_response(int num_antennas, double angle);

// Regularized zero-forcing directions V = H^H (H H^H + eps I)^-1 with columns
// scaled to unit norm. Throws on a failed or non-finite solve.
Eigen::MatrixXcd rzf_precoder(const Eigen::MatrixXcd& h, double eps);

// Per-user achievable rates in bit/s for transmit powers p (W), receiver
// noise power sigma2 (W) and bandwidth (Hz).
Eigen::VectorXd compute_rates(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& v,
                              const Eigen::VectorXd& power, double noise_power,
                              double bandwidth);

}  // namespace xrsched
