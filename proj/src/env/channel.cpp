#include "xrsched/env/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace xrsched {

ChannelModel::ChannelModel(int num_users, ChannelConfig cfg, Rng& rng) : cfg_(cfg) {
  if (num_users < 1 || cfg.num_antennas < 1 || cfg.num_paths < 1) {
    throw std::invalid_argument("channel: users, antennas and paths must be >= 1");
  }
  users_.resize(num_users);
  for (auto& u : users_) {
    const double gain_db = rng.uniform(cfg.gain_db_min, cfg.gain_db_max);
    u.gain = std::pow(10.0, gain_db / 10.0);
    u.path_var.resize(cfg.num_paths);
    double total = 0.0;
    for (int l = 0; l < cfg.num_paths; ++l) {
      u.path_var[l] = rng.exponential(1.0);
      total += u.path_var[l];
    }
    u.path_var *= u.gain / total;
    u.mean_aod = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
  }
}

Eigen::VectorXcd ula_response(int num_antennas, double angle) {
  Eigen::VectorXcd a(num_antennas);
  const double s = std::sin(angle);
  for (int m = 0; m < num_antennas; ++m) {
    const double phase = -M_PI * m * s;
    a[m] = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return a;
}

Eigen::MatrixXcd ChannelModel::generate(Rng& rng) const {
  const int m = cfg_.num_antennas;
  // Laplacian scale chosen so the perturbation stddev equals the spread.
  const double spread = cfg_.angular_spread_deg * M_PI / 180.0;
  const double scale = spread / std::sqrt(2.0);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(num_users(), m);
  for (int k = 0; k < num_users(); ++k) {
    const auto& u = users_[static_cast<std::size_t>(k)];
    for (int l = 0; l < cfg_.num_paths; ++l) {
      const double sd = std::sqrt(u.path_var[l] / 2.0);
      const std::complex<double> coef(rng.normal(0.0, sd), rng.normal(0.0, sd));
      const double angle = u.mean_aod + rng.laplace(scale);
      h.row(k) += coef * ula_response(m, angle).transpose();
    }
  }
  return h;
}

Eigen::MatrixXcd rzf_precoder(const Eigen::MatrixXcd& h, double eps) {
  const Eigen::Index k = h.rows();
  Eigen::MatrixXcd gram = h * h.adjoint();
  gram.diagonal().array() += eps;
  const Eigen::MatrixXcd hh = h.adjoint();
  Eigen::LDLT<Eigen::MatrixXcd> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("rzf: gram solve failed (singular for this eps)");
  }
  // V = H^H (H H^H + eps I)^-1, then unit-norm columns.
  Eigen::MatrixXcd v = hh * solver.solve(Eigen::MatrixXcd::Identity(k, k));
  if (!v.allFinite()) {
    throw std::runtime_error("rzf: non-finite precoder (singular for this eps)");
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    const double norm = v.col(j).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw std::runtime_error("rzf: zero-norm precoder column");
    }
    v.col(j) /= norm;
  }
  return v;
}

Eigen::VectorXd compute_rates(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd& v,
                              const Eigen::VectorXd& power, double noise_power,
                              double bandwidth) {
  const Eigen::Index k = h.rows();
  if (v.cols() != k || power.size() != k) {
    throw std::invalid_argument("rates: dimension mismatch");
  }
  if (!(noise_power > 0.0)) {
    throw std::invalid_argument("rates: noise power must be positive");
  }
  // gains(k, m) = |h_k . v_m|^2
  const Eigen::MatrixXcd cross = h * v;
  const Eigen::MatrixXd gains = cross.cwiseAbs2();
  Eigen::VectorXd rates(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double signal = power[i] * gains(i, i);
    double interference = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (j != i) interference += power[j] * gains(i, j);
    }
    rates[i] = bandwidth * std::log2(1.0 + signal / (interference + noise_power));
  }
  return rates;
}

}  // namespace xrsched
