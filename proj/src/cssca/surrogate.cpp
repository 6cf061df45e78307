#include "xrsched/cssca/surrogate.hpp"

#include <stdexcept>

namespace xrsched {

double SurrogateSet::value(int k, const Eigen::VectorXd& theta) const {
  const Eigen::VectorXd d = theta - anchor;
  return f_hat[k] + g_hat[static_cast<std::size_t>(k)].dot(d) + zeta[k] * d.squaredNorm();
}

Eigen::VectorXd SurrogateSet::grad(int k, const Eigen::VectorXd& theta) const {
  return g_hat[static_cast<std::size_t>(k)] + 2.0 * zeta[k] * (theta - anchor);
}

void SurrogateSet::validate() const {
  if (f_hat.size() < 1) throw std::invalid_argument("surrogates: need an objective");
  if (static_cast<Eigen::Index>(g_hat.size()) != f_hat.size() ||
      zeta.size() != f_hat.size()) {
    throw std::invalid_argument("surrogates: f_hat/g_hat/zeta size mismatch");
  }
  for (const auto& g : g_hat) {
    if (g.size() != anchor.size()) {
      throw std::invalid_argument("surrogates: gradient dimension mismatch");
    }
  }
  if ((zeta.array() <= 0.0).any()) {
    throw std::invalid_argument("surrogates: zeta must be strictly positive");
  }
}

SurrogateSet build_surrogates(Eigen::VectorXd anchor, Eigen::VectorXd f_hat,
                              std::vector<Eigen::VectorXd> g_hat,
                              Eigen::VectorXd zeta) {
  SurrogateSet s;
  s.anchor = std::move(anchor);
  s.f_hat = std::move(f_hat);
  s.g_hat = std::move(g_hat);
  s.zeta = std::move(zeta);
  s.validate();
  return s;
}

}  // namespace xrsched
