#include "xrsched/harness/agent.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "xrsched/context/encoder_update.hpp"
#include "xrsched/context/potential_update.hpp"
#include "xrsched/context/reshape.hpp"
#include "xrsched/cssca/estimators.hpp"
#include "xrsched/cssca/schedule.hpp"
#include "xrsched/cssca/subproblem.hpp"
#include "xrsched/cssca/surrogate.hpp"

namespace xrsched {
namespace {

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t id) {
  return Rng(seed).fork(id).seed();
}

GaussianPolicy make_policy(const ExperimentConfig& cfg, int state_dim) {
  const int users = cfg.env.num_users;
  const int n_a = users + 1;
  Eigen::VectorXd lo(n_a), hi(n_a);
  lo.head(users).setZero();
  hi.head(users).setConstant(cfg.env.power_cap);
  lo[users] = cfg.env.eps_min;
  hi[users] = cfg.env.eps_max;
  return GaussianPolicy(MlpSpec{{state_dim, cfg.policy_hidden, 2 * n_a}, false},
                        std::move(lo), std::move(hi));
}

}  // namespace

Agent::Agent(const ExperimentConfig& cfg, Variant variant, std::uint64_t seed)
    : cfg_(cfg),
      variant_(variant),
      num_users_(cfg.env.num_users),
      base_dim_(resolve_env(cfg).state_dim()),
      env_(resolve_env(cfg), child_seed(seed, 1)),
      policy_(make_policy(cfg, base_dim_ +
                                   (variant != Variant::kCsscaCrl ? cfg.latent_dim : 0))),
      critic_(base_dim_ + (variant != Variant::kCsscaCrl ? cfg.latent_dim : 0),
              cfg.env.num_users + 1, cfg.trunk_width, cfg.head_width),
      encoder_{MlpSpec{{2 * base_dim_ + cfg.env.num_users + 1, cfg.factor_hidden,
                        2 * cfg.latent_dim},
                       false},
               cfg.latent_dim, 1e-4},
      root_(seed),
      policy_rng_(root_.fork(2)),
      critic_rng_(root_.fork(3)),
      encoder_rng_(root_.fork(4)) {
  cfg_.validate();
  cfg_.env = env_.config();  // deadlines resolved per user

  Rng init_rng = root_.fork(5);
  theta_ = mlp_init(policy_.net(), init_rng);
  qparams_.reserve(static_cast<std::size_t>(num_users_) + 1);
  for (int k = 0; k <= num_users_; ++k) qparams_.push_back(critic_.init(init_rng));
  psi_ = mlp_init(encoder_.factor_net, init_rng);

  f_hat_ = Eigen::VectorXd::Zero(num_users_ + 1);
  g_hat_.assign(static_cast<std::size_t>(num_users_) + 1,
                Eigen::VectorXd::Zero(theta_.size()));

  cur_obs_ = env_.observe();
  if (uses_context()) {
    cur_window_ = {0, 0};
    cur_draw_ = infer_context(log_, cur_window_, encoder_, psi_, ContextMode::kSample,
                              &encoder_rng_);
    ++encoder_accesses_;
  }
}

int Agent::state_dim() const {
  return base_dim_ + (uses_context() ? cfg_.latent_dim : 0);
}

Eigen::VectorXd Agent::augment(const Eigen::VectorXd& base,
                               const Eigen::VectorXd& z) const {
  if (!uses_context()) return base;
  Eigen::VectorXd s(base.size() + z.size());
  s << base, z;
  return s;
}

Eigen::VectorXd Agent::encoder_input(const Eigen::VectorXd& obs,
                                     const Eigen::VectorXd& action,
                                     const Eigen::VectorXd& next_obs) const {
  Eigen::VectorXd in(obs.size() + action.size() + next_obs.size());
  in << obs, action, next_obs;
  return in;
}

std::pair<std::int64_t, std::int64_t> Agent::context_window() const {
  const std::int64_t end = log_.end();
  const std::int64_t begin = std::max(log_.begin(), end - cfg_.context_window);
  return {begin, end};
}

Action Agent::to_action(const Eigen::VectorXd& flat) const {
  Action a;
  a.power = flat.head(num_users_);
  a.reg_eps = flat[num_users_];
  return a;
}

IterationBatch Agent::collect_batch(IterationRecord& rec) {
  IterationBatch batch;
  batch.minibatches = cfg_.critic_steps;
  batch.tuples.reserve(static_cast<std::size_t>(cfg_.batch_size));

  // The encoder may have moved since the factors in the log were cached.
  log_.invalidate_cache();
  if (uses_context()) {
    cur_draw_ = infer_context(log_, cur_window_, encoder_, psi_, ContextMode::kSample,
                              &encoder_rng_);
    ++encoder_accesses_;
  }

  Eigen::VectorXd slot_drop = Eigen::VectorXd::Zero(num_users_);
  Eigen::VectorXd dropped = Eigen::VectorXd::Zero(num_users_);
  Eigen::VectorXd exited = Eigen::VectorXd::Zero(num_users_);
  Eigen::VectorXd shaping_sum = Eigen::VectorXd::Zero(num_users_);
  double power_sum = 0.0;

  for (int t = 0; t < cfg_.batch_size; ++t) {
    ObservationTuple tup;
    tup.state = augment(cur_obs_, cur_draw_.z);
    if (uses_context()) {
      tup.xi = cur_draw_.xi;
      tup.window_begin = cur_window_.first;
      tup.window_end = cur_window_.second;
    }

    const PolicySample ps = policy_.sample(theta_, tup.state, policy_rng_);
    tup.action = ps.action;
    tup.action_raw = ps.raw;

    const StepResult res = env_.step(to_action(ps.action));
    Eigen::VectorXd next_obs = env_.observe();

    power_sum += res.shifted_costs[0];
    for (int k = 0; k < num_users_; ++k) {
      if (res.service[static_cast<std::size_t>(k)].dropout) {
        slot_drop[k] += 1.0;
        dropped[k] += 1.0;
      }
      if (res.service[static_cast<std::size_t>(k)].packet_exited) exited[k] += 1.0;
    }
    rec.regime_id = res.regime_id;
    tup.costs = res.shifted_costs;

    if (uses_context()) {
      log_.append(encoder_input(cur_obs_, ps.action, next_obs));
      cur_window_ = context_window();
      cur_draw_ = infer_context(log_, cur_window_, encoder_, psi_, ContextMode::kSample,
                                &encoder_rng_);
      ++encoder_accesses_;
    }
    tup.next_state = augment(next_obs, cur_draw_.z);

    if (uses_shaping()) {
      Eigen::VectorXd sh;
      tup.reshaped_costs =
          reshape_costs(tup.costs, tup.state, tup.next_state, critic_, qparams_, &sh);
      ++potential_accesses_;
      shaping_sum += sh;
    } else {
      tup.reshaped_costs = tup.costs;
    }

    cur_obs_ = std::move(next_obs);
    batch.tuples.push_back(std::move(tup));
  }

  const double b = static_cast<double>(cfg_.batch_size);
  rec.mean_power = power_sum / b;
  rec.batch_drop = slot_drop / b;
  rec.shaping = shaping_sum / b;

  drop_history_.emplace_back(dropped, exited);
  while (static_cast<int>(drop_history_.size()) > cfg_.metrics_window) {
    drop_history_.pop_front();
  }
  Eigen::VectorXd win_dropped = Eigen::VectorXd::Zero(num_users_);
  Eigen::VectorXd win_exited = Eigen::VectorXd::Zero(num_users_);
  for (const auto& [d, e] : drop_history_) {
    win_dropped += d;
    win_exited += e;
  }
  rec.window_drop = Eigen::VectorXd::Zero(num_users_);
  for (int k = 0; k < num_users_; ++k) {
    if (win_exited[k] > 0.0) rec.window_drop[k] = win_dropped[k] / win_exited[k];
  }
  return batch;
}

void Agent::critic_phase(const IterationBatch& batch, double eta, double upsilon,
                         IterationRecord& rec) {
  f_hat_ = update_average(f_hat_, estimate_cost_means(batch), eta);

  rec.critic_residuals = Eigen::VectorXd::Zero(num_users_ + 1);
  std::vector<Eigen::VectorXd> succ;
  for (int j = 0; j < cfg_.critic_steps; ++j) {
    const auto [mb_begin, mb_end] = batch.minibatch_range(j);
    succ.clear();
    succ.reserve(static_cast<std::size_t>(mb_end - mb_begin));
    for (int t = mb_begin; t < mb_end; ++t) {
      succ.push_back(
          policy_.sample(theta_, batch.tuples[static_cast<std::size_t>(t)].next_state,
                         critic_rng_)
              .action);
    }
    const bool last = (j == cfg_.critic_steps - 1);

    for (int k = 0; k <= num_users_; ++k) {
      const TdStats st = td_critic_update(critic_, qparams_[static_cast<std::size_t>(k)],
                                          batch, j, succ, k, f_hat_[k], upsilon);
      if (last) rec.critic_residuals[k] = st.mean_abs_residual;
    }

    if (uses_context() && !cfg_.freeze_encoder) {
      const EncoderUpdateStats es =
          encoder_update(encoder_, psi_, log_, batch, j, succ, critic_, qparams_,
                         f_hat_, upsilon, cfg_.exact_kl);
      ++encoder_accesses_;
      if (last) rec.encoder_kl = es.mean_kl;
    }

    if (uses_shaping() && !cfg_.freeze_potentials) {
      double err = 0.0;
      for (int k = 1; k <= num_users_; ++k) {
        const PotentialStats pstats = potential_update(
            critic_, qparams_[static_cast<std::size_t>(k)], batch, j, policy_, theta_,
            cfg_.num_action_samples, upsilon, critic_rng_);
        ++potential_accesses_;
        err += pstats.mean_abs_error;
      }
      if (last) rec.potential_error = err / num_users_;
    }
  }

  const auto grads = estimate_policy_grads(batch, policy_, theta_, critic_, qparams_);
  for (int k = 0; k <= num_users_; ++k) {
    g_hat_[static_cast<std::size_t>(k)] =
        update_average(g_hat_[static_cast<std::size_t>(k)],
                       grads[static_cast<std::size_t>(k)], eta);
  }

  rec.f_hat = f_hat_;
  rec.max_violation = f_hat_.tail(num_users_).maxCoeff();
}

void Agent::actor_phase(double mu, IterationRecord& rec) {
  if (iteration_ <= cfg_.pretrain_iterations) {
    rec.branch = 'p';
    return;
  }
  Eigen::VectorXd zeta = Eigen::VectorXd::Constant(num_users_ + 1, cfg_.zeta);
  const SurrogateSet s = build_surrogates(theta_, f_hat_, g_hat_, std::move(zeta));
  const ThetaBox box{cfg_.theta_lo, cfg_.theta_hi};

  Eigen::VectorXd target;
  try {
    const ObjectiveResult res = solve_objective_update(s, box, cfg_.subproblem_tol,
                                                       cfg_.subproblem_max_iters);
    if (res.status == SubproblemStatus::kOk) {
      rec.branch = 'o';
      rec.surrogate_feasible = true;
      rec.dual_iterations = res.info.dual_iterations;
      target = res.theta;
    } else {
      const FeasibleResult fr = solve_feasible_update(s, box, cfg_.subproblem_tol,
                                                      cfg_.subproblem_max_iters);
      rec.branch = 'f';
      rec.surrogate_feasible = false;
      rec.dual_iterations = fr.info.dual_iterations;
      target = fr.theta;
    }
  } catch (const std::runtime_error&) {
    const FeasibleResult fr = solve_feasible_update(s, box, cfg_.subproblem_tol,
                                                    cfg_.subproblem_max_iters);
    rec.branch = 'x';
    rec.surrogate_feasible = false;
    rec.dual_iterations = fr.info.dual_iterations;
    target = fr.theta;
  }
  theta_ = mix_theta(theta_, target, mu);
}

IterationRecord Agent::run_iteration() {
  IterationRecord rec;
  rec.iteration = ++iteration_;
  const StepSizes ss = step_sizes(iteration_, cfg_.schedule);
  rec.mu = ss.mu;
  rec.eta = ss.eta;
  rec.upsilon = ss.upsilon;
  rec.policy_checksum =
      fnv1a64(theta_.data(), static_cast<std::size_t>(theta_.size()) * sizeof(double));

  const IterationBatch batch = collect_batch(rec);
  critic_phase(batch, ss.eta, ss.upsilon, rec);
  actor_phase(ss.mu, rec);

  if (uses_context()) log_.compact(cfg_.context_window);
  return rec;
}

EvalRecord Agent::evaluate(int eval_index, int slots) const {
  EvalRecord rec;
  rec.iteration = iteration_;
  rec.slots = slots;

  Environment env(cfg_.env, root_.fork(1000 + static_cast<std::uint64_t>(eval_index)).seed());
  Rng prng = root_.fork(5000 + static_cast<std::uint64_t>(eval_index));
  Rng zrng = root_.fork(7000 + static_cast<std::uint64_t>(eval_index));
  TransitionLog elog;

  ContextDraw draw;
  std::pair<std::int64_t, std::int64_t> win{0, 0};
  if (uses_context()) {
    draw = infer_context(elog, win, encoder_, psi_, ContextMode::kSample, &zrng);
    ++encoder_accesses_;
  }

  Eigen::VectorXd obs = env.observe();
  double power_sum = 0.0;
  Eigen::VectorXd slot_drop = Eigen::VectorXd::Zero(num_users_);
  Eigen::VectorXd dropped = Eigen::VectorXd::Zero(num_users_);
  Eigen::VectorXd exited = Eigen::VectorXd::Zero(num_users_);

  for (int t = 0; t < slots; ++t) {
    const Eigen::VectorXd state = augment(obs, draw.z);
    const PolicySample ps = policy_.sample(theta_, state, prng);
    const StepResult res = env.step(to_action(ps.action));
    Eigen::VectorXd next_obs = env.observe();

    power_sum += res.shifted_costs[0];
    for (int k = 0; k < num_users_; ++k) {
      if (res.service[static_cast<std::size_t>(k)].dropout) {
        slot_drop[k] += 1.0;
        dropped[k] += 1.0;
      }
      if (res.service[static_cast<std::size_t>(k)].packet_exited) exited[k] += 1.0;
    }

    if (uses_context()) {
      elog.append(encoder_input(obs, ps.action, next_obs));
      elog.compact(cfg_.context_window);
      const std::int64_t end = elog.end();
      win = {std::max(elog.begin(), end - cfg_.context_window), end};
      draw = infer_context(elog, win, encoder_, psi_, ContextMode::kSample, &zrng);
      ++encoder_accesses_;
    }
    obs = std::move(next_obs);
  }

  rec.mean_power = power_sum / static_cast<double>(slots);
  rec.slot_drop = slot_drop / static_cast<double>(slots);
  rec.packet_drop = Eigen::VectorXd::Zero(num_users_);
  for (int k = 0; k < num_users_; ++k) {
    if (exited[k] > 0.0) rec.packet_drop[k] = dropped[k] / exited[k];
  }
  return rec;
}

std::vector<CheckpointEntry> Agent::snapshot() const {
  std::vector<CheckpointEntry> entries;
  entries.push_back({"iteration", {1},
                     Eigen::VectorXd::Constant(1, static_cast<double>(iteration_))});
  entries.push_back({"theta", policy_.net().sizes, theta_});
  for (int k = 0; k <= num_users_; ++k) {
    entries.push_back({"critic_" + std::to_string(k),
                       {critic_.state_dim(), critic_.action_dim(), critic_.param_count()},
                       qparams_[static_cast<std::size_t>(k)]});
  }
  entries.push_back({"psi", encoder_.factor_net.sizes, psi_});
  entries.push_back({"f_hat", {num_users_ + 1}, f_hat_});
  for (int k = 0; k <= num_users_; ++k) {
    entries.push_back({"g_hat_" + std::to_string(k),
                       {static_cast<int>(theta_.size())},
                       g_hat_[static_cast<std::size_t>(k)]});
  }
  return entries;
}

void Agent::restore(const std::vector<CheckpointEntry>& entries) {
  auto take = [&](const std::string& name, Eigen::Index size) -> const Eigen::VectorXd& {
    for (const auto& e : entries) {
      if (e.name == name) {
        if (e.values.size() != size) {
          throw std::invalid_argument("restore: size mismatch for '" + name + "'");
        }
        return e.values;
      }
    }
    throw std::invalid_argument("restore: missing entry '" + name + "'");
  };
  iteration_ = static_cast<std::int64_t>(take("iteration", 1)[0]);
  theta_ = take("theta", theta_.size());
  for (int k = 0; k <= num_users_; ++k) {
    qparams_[static_cast<std::size_t>(k)] =
        take("critic_" + std::to_string(k), qparams_[static_cast<std::size_t>(k)].size());
  }
  psi_ = take("psi", psi_.size());
  f_hat_ = take("f_hat", num_users_ + 1);
  for (int k = 0; k <= num_users_; ++k) {
    g_hat_[static_cast<std::size_t>(k)] =
        take("g_hat_" + std::to_string(k), theta_.size());
  }
  log_.invalidate_cache();
}

}  // namespace xrsched
