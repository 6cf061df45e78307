#include "xrsched/context/inference.hpp"

#include <stdexcept>

#include "xrsched/nets/policy.hpp"

namespace xrsched {

GaussianFactor EncoderSpec::factor(const Eigen::VectorXd& psi,
                                   const Eigen::VectorXd& input,
                                   MlpWorkspace* ws) const {
  if (factor_net.output_dim() != 2 * latent_dim) {
    throw std::invalid_argument("encoder: factor net output must be 2 * latent_dim");
  }
  const Eigen::VectorXd out = mlp_forward(factor_net, psi, input, ws);
  GaussianFactor f;
  f.mean = out.head(latent_dim);
  f.var.resize(latent_dim);
  for (int j = 0; j < latent_dim; ++j) {
    f.var[j] = softplus(out[latent_dim + j]) + var_floor;
  }
  return f;
}

ContextDraw infer_context(TransitionLog& log,
                          std::pair<std::int64_t, std::int64_t> window,
                          const EncoderSpec& spec, const Eigen::VectorXd& psi,
                          ContextMode mode, Rng* rng) {
  std::vector<GaussianFactor> factors;
  factors.reserve(static_cast<std::size_t>(window.second - window.first));
  for (std::int64_t i = window.first; i < window.second; ++i) {
    if (!log.has_cached(i)) log.set_cached(i, spec.factor(psi, log.input(i)));
    factors.push_back(log.cached(i));
  }
  ContextDraw draw;
  draw.aggregate = gaussian_product_aggregate(factors, spec.latent_dim);
  if (mode == ContextMode::kMean) {
    draw.xi = Eigen::VectorXd::Zero(spec.latent_dim);
    draw.z = draw.aggregate.mean;
  } else {
    if (!rng) throw std::invalid_argument("infer_context: sampling needs an rng");
    draw.xi.resize(spec.latent_dim);
    for (int j = 0; j < spec.latent_dim; ++j) draw.xi[j] = rng->normal();
    draw.z = reparam_sample(draw.aggregate, draw.xi);
  }
  return draw;
}

}  // namespace xrsched
