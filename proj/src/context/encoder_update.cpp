#include "xrsched/context/encoder_update.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "xrsched/nets/policy.hpp"

namespace xrsched {

EncoderUpdateStats encoder_update(const EncoderSpec& spec, Eigen::VectorXd& psi,
                                  const TransitionLog& log, const IterationBatch& batch,
                                  int minibatch_index,
                                  const std::vector<Eigen::VectorXd>& successor_actions,
                                  const DualHeadNet& net,
                                  const std::vector<Eigen::VectorXd>& qparams,
                                  const Eigen::VectorXd& f_hat, double upsilon,
                                  bool exact_kl) {
  const auto [mb_begin, mb_end] = batch.minibatch_range(minibatch_index);
  if (static_cast<int>(successor_actions.size()) != mb_end - mb_begin) {
    throw std::invalid_argument("encoder update: successor action count mismatch");
  }
  const int nz = spec.latent_dim;
  const int num_k = static_cast<int>(f_hat.size()) - 1;

  // The mini-batch is contiguous in time, so the union of its context
  // windows is one contiguous transition range.
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (int t = mb_begin; t < mb_end; ++t) {
    const auto& tup = batch.tuples[static_cast<std::size_t>(t)];
    if (tup.xi.size() != nz) {
      throw std::logic_error("encoder update: tuple lacks a stored reparam draw");
    }
    if (tup.window_end > tup.window_begin) {
      lo = std::min(lo, tup.window_begin);
      hi = std::max(hi, tup.window_end);
    }
  }
  EncoderUpdateStats stats;
  const std::int64_t nf = (hi > lo) ? hi - lo : 0;

  // One shared forward per distinct transition, at the current psi.
  std::vector<MlpWorkspace> fws(static_cast<std::size_t>(nf));
  std::vector<GaussianFactor> fout(static_cast<std::size_t>(nf));
  std::vector<GaussianCotangent> fcot(static_cast<std::size_t>(nf));
  for (std::int64_t i = 0; i < nf; ++i) {
    fout[static_cast<std::size_t>(i)] =
        spec.factor(psi, log.input(lo + i), &fws[static_cast<std::size_t>(i)]);
    fcot[static_cast<std::size_t>(i)].mean = Eigen::VectorXd::Zero(nz);
    fcot[static_cast<std::size_t>(i)].var = Eigen::VectorXd::Zero(nz);
  }

  Eigen::VectorXd scratch_qgrad;
  if (num_k >= 1) scratch_qgrad = Eigen::VectorXd::Zero(qparams[1].size());

  for (int t = mb_begin; t < mb_end; ++t) {
    const auto& tup = batch.tuples[static_cast<std::size_t>(t)];
    const std::int64_t wb = tup.window_begin;
    const std::int64_t we = tup.window_end;
    if (we <= wb) continue;  // prior-only draw: no psi dependence

    std::vector<GaussianFactor> facs(
        fout.begin() + static_cast<std::ptrdiff_t>(wb - lo),
        fout.begin() + static_cast<std::ptrdiff_t>(we - lo));
    const GaussianFactor agg = gaussian_product_aggregate(facs, nz);

    stats.mean_kl +=
        0.5 * (agg.var.array() + agg.mean.array().square() - 1.0 - agg.var.array().log())
                  .sum();
    Eigen::VectorXd mean_cot = agg.mean;
    Eigen::VectorXd var_cot =
        exact_kl ? (0.5 * (1.0 - agg.var.array().inverse())).matrix().eval()
                 : (-0.5 * agg.var.array().inverse()).matrix().eval();

    if (num_k >= 1) {
      Eigen::VectorXd zcot = Eigen::VectorXd::Zero(nz);
      for (int k = 1; k <= num_k; ++k) {
        DualHeadNet::QWorkspace ws;
        const auto& qp = qparams[static_cast<std::size_t>(k)];
        const double q = net.q_value(qp, tup.state, tup.action, &ws);
        const double q_next =
            net.q_value(qp, tup.next_state,
                        successor_actions[static_cast<std::size_t>(t - mb_begin)]);
        const double residual = q - tup.reshaped_costs[k] + f_hat[k] - q_next;
        Eigen::VectorXd state_grad;
        net.q_backward(qp, ws, residual, scratch_qgrad, &state_grad);
        zcot += state_grad.tail(nz);
      }
      mean_cot += zcot;
      var_cot += (zcot.array() * tup.xi.array() / (2.0 * agg.var.array().sqrt())).matrix();
    }

    std::vector<GaussianCotangent> local(facs.size());
    for (auto& c : local) {
      c.mean = Eigen::VectorXd::Zero(nz);
      c.var = Eigen::VectorXd::Zero(nz);
    }
    aggregate_backward(facs, agg, mean_cot, var_cot, local);
    for (std::size_t j = 0; j < local.size(); ++j) {
      auto& slot = fcot[static_cast<std::size_t>(wb - lo) + j];
      slot.mean += local[j].mean;
      slot.var += local[j].var;
    }
  }

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(psi.size());
  Eigen::VectorXd cot(2 * nz);
  for (std::int64_t i = 0; i < nf; ++i) {
    const auto& ws = fws[static_cast<std::size_t>(i)];
    const auto& c = fcot[static_cast<std::size_t>(i)];
    const Eigen::VectorXd raw_var = ws.act.back().tail(nz);
    cot.head(nz) = c.mean;
    for (int j = 0; j < nz; ++j) cot[nz + j] = c.var[j] * sigmoid(raw_var[j]);
    mlp_backward(spec.factor_net, psi, ws, cot, grad);
  }
  psi -= upsilon * grad;
  stats.mean_kl /= static_cast<double>(mb_end - mb_begin);
  return stats;
}

}  // namespace xrsched
