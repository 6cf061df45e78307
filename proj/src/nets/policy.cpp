#include "xrsched/nets/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace xrsched {

double softplus(double x) {
  if (x > 30.0) return x;
  if (x < -30.0) return std::exp(x);
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

GaussianPolicy::GaussianPolicy(MlpSpec net, Eigen::VectorXd lo, Eigen::VectorXd hi,
                               double sigma_floor)
    : net_(std::move(net)), lo_(std::move(lo)), hi_(std::move(hi)),
      sigma_floor_(sigma_floor) {
  if (lo_.size() != hi_.size()) {
    throw std::invalid_argument("policy: bound vectors differ in size");
  }
  if (net_.output_dim() != 2 * static_cast<int>(lo_.size())) {
    throw std::invalid_argument("policy: net output must be 2 * action_dim");
  }
  for (int j = 0; j < lo_.size(); ++j) {
    if (!(lo_[j] < hi_[j])) throw std::invalid_argument("policy: requires lo < hi");
  }
}

void GaussianPolicy::heads(const Eigen::VectorXd& params, const Eigen::VectorXd& state,
                           MlpWorkspace* ws, Eigen::VectorXd& mu, Eigen::VectorXd& sigma,
                           Eigen::VectorXd& pre_sigma) const {
  const Eigen::VectorXd out = mlp_forward(net_, params, state, ws);
  const int n = action_dim();
  mu = out.head(n);
  pre_sigma = out.tail(n);
  sigma.resize(n);
  for (int j = 0; j < n; ++j) sigma[j] = softplus(pre_sigma[j]) + sigma_floor_;
}

Eigen::VectorXd GaussianPolicy::squash(const Eigen::VectorXd& raw) const {
  Eigen::VectorXd a(raw.size());
  for (int j = 0; j < raw.size(); ++j) {
    a[j] = lo_[j] + (hi_[j] - lo_[j]) * sigmoid(raw[j]);
  }
  return a;
}

PolicySample GaussianPolicy::sample(const Eigen::VectorXd& params,
                                    const Eigen::VectorXd& state, Rng& rng) const {
  Eigen::VectorXd mu, sigma, pre;
  heads(params, state, nullptr, mu, sigma, pre);
  const int n = action_dim();
  PolicySample s;
  s.raw.resize(n);
  for (int j = 0; j < n; ++j) s.raw[j] = mu[j] + sigma[j] * rng.normal();
  s.action = squash(s.raw);
  s.log_prob = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = (s.raw[j] - mu[j]) / sigma[j];
    s.log_prob += -0.5 * std::log(2.0 * M_PI) - std::log(sigma[j]) - 0.5 * t * t;
  }
  return s;
}

Eigen::VectorXd GaussianPolicy::mean_action(const Eigen::VectorXd& params,
                                            const Eigen::VectorXd& state) const {
  Eigen::VectorXd mu, sigma, pre;
  heads(params, state, nullptr, mu, sigma, pre);
  return squash(mu);
}

double GaussianPolicy::log_prob(const Eigen::VectorXd& params,
                                const Eigen::VectorXd& state,
                                const Eigen::VectorXd& raw) const {
  Eigen::VectorXd mu, sigma, pre;
  heads(params, state, nullptr, mu, sigma, pre);
  double lp = 0.0;
  for (int j = 0; j < action_dim(); ++j) {
    const double t = (raw[j] - mu[j]) / sigma[j];
    lp += -0.5 * std::log(2.0 * M_PI) - std::log(sigma[j]) - 0.5 * t * t;
  }
  return lp;
}

Eigen::VectorXd GaussianPolicy::log_prob_grad(const Eigen::VectorXd& params,
                                              const Eigen::VectorXd& state,
                                              const Eigen::VectorXd& raw) const {
  MlpWorkspace ws;
  Eigen::VectorXd mu, sigma, pre;
  heads(params, state, &ws, mu, sigma, pre);
  const int n = action_dim();
  Eigen::VectorXd cot(2 * n);
  for (int j = 0; j < n; ++j) {
    const double d = raw[j] - mu[j];
    const double s = sigma[j];
    cot[j] = d / (s * s);
    const double dlp_dsigma = -1.0 / s + d * d / (s * s * s);
    cot[n + j] = dlp_dsigma * sigmoid(pre[j]);
  }
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(net_.param_count());
  mlp_backward(net_, params, ws, cot, grad, nullptr);
  return grad;
}

}  // namespace xrsched
