#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "support/finite_diff.hpp"
#include "support/qp_oracle.hpp"
#include "xrsched/cssca/batch.hpp"
#include "xrsched/cssca/estimators.hpp"
#include "xrsched/cssca/schedule.hpp"
#include "xrsched/cssca/subproblem.hpp"
#include "xrsched/cssca/surrogate.hpp"
#include "xrsched/nets/mlp.hpp"
#include "xrsched/rng.hpp"

using namespace xrsched;
using xrsched::testing::rel_err;

namespace {

Eigen::VectorXd random_vec(int n, Rng& rng, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

SurrogateSet random_surrogates(int n, int k, Rng& rng, const ThetaBox& box) {
  Eigen::VectorXd anchor(n);
  for (int i = 0; i < n; ++i) anchor[i] = rng.uniform(box.lo, box.hi);
  Eigen::VectorXd f_hat(k + 1);
  std::vector<Eigen::VectorXd> g_hat;
  Eigen::VectorXd zeta(k + 1);
  f_hat[0] = rng.uniform(-2.0, 2.0);
  for (int j = 0; j <= k; ++j) {
    if (j > 0) f_hat[j] = rng.uniform(-2.0, 2.0);
    g_hat.push_back(random_vec(n, rng, 2.0));
    zeta[j] = rng.uniform(0.5, 2.0);
  }
  return build_surrogates(anchor, f_hat, g_hat, zeta);
}

}  // namespace

TEST_CASE("step sizes follow the power schedules") {
  StepSchedule sch;
  const auto s1 = step_sizes(1, sch);
  CHECK(s1.mu == sch.mu0);
  CHECK(s1.eta == sch.eta0);
  CHECK(s1.upsilon == sch.upsilon0);
  const auto s100 = step_sizes(100, sch);
  CHECK(s100.mu == doctest::Approx(sch.mu0 * std::pow(100.0, -sch.rho1)).epsilon(1e-15));
  CHECK(s100.eta == doctest::Approx(sch.eta0 * std::pow(100.0, -sch.rho2)).epsilon(1e-15));
  CHECK(s100.upsilon ==
        doctest::Approx(sch.upsilon0 * std::pow(100.0, -sch.rho3)).epsilon(1e-15));
  // Strictly decreasing in the iteration index.
  const auto s101 = step_sizes(101, sch);
  CHECK(s101.mu < s100.mu);
  CHECK(s101.eta < s100.eta);
  CHECK(s101.upsilon < s100.upsilon);
  CHECK_THROWS_AS((void)step_sizes(0, sch), std::invalid_argument);
}

TEST_CASE("schedule validation distinguishes strict and relaxed") {
  StepSchedule sch;
  sch.validate();
  sch.validate(true);

  StepSchedule historic = sch;
  historic.rho1 = 0.7;
  historic.rho2 = 0.6;
  historic.rho3 = 0.3;  // decays too slowly for the convergence conditions
  CHECK_THROWS_AS(historic.validate(), std::invalid_argument);
  historic.validate(true);

  StepSchedule swapped = sch;
  swapped.rho1 = 0.6;
  swapped.rho2 = 0.7;  // averaging must not decay faster than mixing
  CHECK_THROWS_AS(swapped.validate(), std::invalid_argument);
  swapped.validate(true);

  StepSchedule bad = sch;
  bad.mu0 = 0.0;
  CHECK_THROWS_AS(bad.validate(true), std::invalid_argument);
  bad = sch;
  bad.rho1 = 1.5;
  CHECK_THROWS_AS(bad.validate(true), std::invalid_argument);
}

TEST_CASE("recursive averages use one step size on both terms") {
  CHECK(update_average(2.0, 6.0, 0.25) == doctest::Approx(3.0).epsilon(1e-15));
  Eigen::VectorXd prev(2), sample(2);
  prev << 1.0, -1.0;
  sample << 3.0, 1.0;
  const auto next = update_average(prev, sample, 0.5);
  CHECK(next[0] == 2.0);
  CHECK(next[1] == 0.0);
}

TEST_CASE("mini-batch ranges partition the batch") {
  IterationBatch batch;
  batch.tuples.resize(10);
  batch.minibatches = 3;
  int covered = 0;
  int prev_end = 0;
  for (int j = 0; j < batch.minibatches; ++j) {
    const auto [b, e] = batch.minibatch_range(j);
    CHECK(b == prev_end);
    CHECK(e > b);
    covered += e - b;
    prev_end = e;
  }
  CHECK(prev_end == 10);
  CHECK(covered == 10);
}

TEST_CASE("cost mean estimator averages reshaped costs") {
  IterationBatch batch;
  for (int t = 0; t < 4; ++t) {
    ObservationTuple tup;
    tup.reshaped_costs = Eigen::VectorXd::Constant(2, static_cast<double>(t));
    batch.tuples.push_back(tup);
  }
  const auto mean = estimate_cost_means(batch);
  CHECK(mean[0] == 1.5);
  CHECK(mean[1] == 1.5);
  IterationBatch empty;
  CHECK_THROWS_AS((void)estimate_cost_means(empty), std::invalid_argument);
}

TEST_CASE("td update applies the accumulated semi-gradient") {
  DualHeadNet net(4, 2, 6, 5);
  Rng rng(80);
  Eigen::VectorXd qparams = net.init(rng);
  const Eigen::VectorXd before = qparams;

  IterationBatch batch;
  batch.minibatches = 2;
  std::vector<Eigen::VectorXd> succ;
  for (int t = 0; t < 6; ++t) {
    ObservationTuple tup;
    tup.state = random_vec(4, rng);
    tup.next_state = random_vec(4, rng);
    tup.action = random_vec(2, rng);
    tup.reshaped_costs = random_vec(2, rng);
    batch.tuples.push_back(tup);
  }
  const auto [mb, me] = batch.minibatch_range(1);
  for (int t = mb; t < me; ++t) succ.push_back(random_vec(2, rng));

  const double f_hat = 0.37;
  const double upsilon = 1e-3;

  // Replicate: the whole mini-batch is evaluated at the incoming parameters,
  // residuals weight dQ/dparams at (s_t, a_t) only, and the step lands once.
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(net.param_count());
  double want_resid = 0.0;
  for (int t = mb; t < me; ++t) {
    const auto& tup = batch.tuples[static_cast<std::size_t>(t)];
    DualHeadNet::QWorkspace ws;
    const double q = net.q_value(before, tup.state, tup.action, &ws);
    const double qn =
        net.q_value(before, tup.next_state, succ[static_cast<std::size_t>(t - mb)]);
    const double resid = q - tup.reshaped_costs[1] + f_hat - qn;
    want_resid += std::abs(resid);
    net.q_backward(before, ws, resid, grad);
  }
  want_resid /= static_cast<double>(me - mb);
  const Eigen::VectorXd want = before - upsilon * grad;

  const auto stats = td_critic_update(net, qparams, batch, 1, succ, 1, f_hat, upsilon);
  CHECK(rel_err(qparams, want) < 1e-14);
  CHECK(stats.mean_abs_residual == doctest::Approx(want_resid).epsilon(1e-12));
  CHECK(qparams != before);

  std::vector<Eigen::VectorXd> short_succ(succ.begin(), succ.end() - 1);
  CHECK_THROWS_AS(
      (void)td_critic_update(net, qparams, batch, 1, short_succ, 1, f_hat, upsilon),
      std::invalid_argument);
}

TEST_CASE("policy gradient estimate is mean q times score") {
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, 1e-6;
  hi << 4.0, 1.0;
  const GaussianPolicy policy(MlpSpec{{4, 5, 4}, false}, lo, hi);
  DualHeadNet net(4, 2, 5, 4);
  Rng rng(81);
  const Eigen::VectorXd theta = mlp_init(policy.net(), rng);
  std::vector<Eigen::VectorXd> qparams{net.init(rng), net.init(rng)};

  IterationBatch batch;
  for (int t = 0; t < 5; ++t) {
    ObservationTuple tup;
    tup.state = random_vec(4, rng);
    const auto smp = policy.sample(theta, tup.state, rng);
    tup.action = smp.action;
    tup.action_raw = smp.raw;
    batch.tuples.push_back(tup);
  }

  const auto grads = estimate_policy_grads(batch, policy, theta, net, qparams);
  REQUIRE(grads.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    Eigen::VectorXd want = Eigen::VectorXd::Zero(theta.size());
    for (const auto& tup : batch.tuples) {
      want += net.q_value(qparams[k], tup.state, tup.action) *
              policy.log_prob_grad(theta, tup.state, tup.action_raw);
    }
    want /= static_cast<double>(batch.tuples.size());
    CHECK(rel_err(grads[k], want) < 1e-14);
  }
}

TEST_CASE("surrogate values and gradients follow the quadratic form") {
  Rng rng(82);
  const ThetaBox box;
  const auto s = random_surrogates(4, 2, rng, box);
  const Eigen::VectorXd theta = random_vec(4, rng, 3.0);
  for (int k = 0; k <= 2; ++k) {
    const Eigen::VectorXd d = theta - s.anchor;
    const double want = s.f_hat[k] + s.g_hat[static_cast<std::size_t>(k)].dot(d) +
                        s.zeta[k] * d.squaredNorm();
    CHECK(s.value(k, theta) == doctest::Approx(want).epsilon(1e-14));
    const Eigen::VectorXd wg = s.g_hat[static_cast<std::size_t>(k)] + 2.0 * s.zeta[k] * d;
    CHECK(rel_err(s.grad(k, theta), wg) < 1e-14);
  }
  CHECK(s.num_constraints() == 2);
}

TEST_CASE("surrogate construction validates shapes and curvature") {
  Eigen::VectorXd anchor = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd f_hat = Eigen::VectorXd::Zero(2);
  std::vector<Eigen::VectorXd> g{Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3)};
  Eigen::VectorXd zeta = Eigen::VectorXd::Ones(2);

  (void)build_surrogates(anchor, f_hat, g, zeta);
  Eigen::VectorXd bad_zeta = zeta;
  bad_zeta[1] = 0.0;
  CHECK_THROWS_AS((void)build_surrogates(anchor, f_hat, g, bad_zeta),
                  std::invalid_argument);
  std::vector<Eigen::VectorXd> bad_g{Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2)};
  CHECK_THROWS_AS((void)build_surrogates(anchor, f_hat, bad_g, zeta),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)build_surrogates(anchor, Eigen::VectorXd::Zero(3), g, zeta),
                  std::invalid_argument);
}

TEST_CASE("unconstrained objective update is the clamped newton point") {
  Rng rng(83);
  const ThetaBox box{-1.0, 1.0};
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    const auto s = random_surrogates(n, 0, rng, box);
    const auto res = solve_objective_update(s, box);
    REQUIRE(res.status == SubproblemStatus::kOk);
    Eigen::VectorXd want(n);
    for (int i = 0; i < n; ++i) {
      const double free = s.anchor[i] - s.g_hat[0][i] / (2.0 * s.zeta[0]);
      want[i] = std::clamp(free, box.lo, box.hi);
    }
    CHECK((res.theta - want).lpNorm<Eigen::Infinity>() < 1e-8);
  }
}

TEST_CASE("objective update matches the interior point oracle") {
  Rng rng(84);
  const ThetaBox box{-2.0, 2.0};
  int checked = 0;
  int trial = 0;
  while (checked < 100 && trial < 400) {
    ++trial;
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    const int k = 1 + static_cast<int>(rng.next_u64() % 3);
    const auto s = random_surrogates(n, k, rng, box);
    const auto oracle = xrsched::testing::solve_reference(s, box);
    // Skip instances sitting on the feasibility knife edge.
    if (std::abs(oracle.minmax) < 1e-6) continue;
    ++checked;
    const auto res = solve_objective_update(s, box);
    if (!oracle.feasible) {
      CHECK(res.status == SubproblemStatus::kInfeasible);
      continue;
    }
    REQUIRE(res.status == SubproblemStatus::kOk);
    CHECK(res.theta.size() == n);
    double viol = 0.0;
    for (int j = 1; j <= k; ++j) viol = std::max(viol, s.value(j, res.theta));
    CHECK(viol < 1e-6);
    CHECK(s.value(0, res.theta) == doctest::Approx(oracle.objective).epsilon(1e-4));
    CHECK((res.theta.array() >= box.lo - 1e-12).all());
    CHECK((res.theta.array() <= box.hi + 1e-12).all());
  }
  CHECK(checked == 100);
}

TEST_CASE("feasible update solves the minmax problem") {
  Rng rng(85);
  const ThetaBox box{-2.0, 2.0};
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 5);
    const int k = 1 + static_cast<int>(rng.next_u64() % 3);
    const auto s = random_surrogates(n, k, rng, box);
    const auto res = solve_feasible_update(s, box);
    const double want = xrsched::testing::reference_minmax(s, box);
    double got = -1e300;
    double anchor_max = -1e300;
    for (int j = 1; j <= k; ++j) {
      got = std::max(got, s.value(j, res.theta));
      anchor_max = std::max(anchor_max, s.value(j, s.anchor));
    }
    CHECK(got == doctest::Approx(res.minmax).epsilon(1e-9));
    CHECK(got <= anchor_max + 1e-9);
    CHECK(got == doctest::Approx(want).epsilon(1e-4));
  }
}

TEST_CASE("oracle agrees with a dense grid on small problems") {
  Rng rng(86);
  const ThetaBox box{-1.0, 1.0};
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int k = 1 + static_cast<int>(rng.next_u64() % 2);
    const auto s = random_surrogates(n, k, rng, box);
    // Grid error is O(h |grad|) when the minimizer sits at a kink or face.
    const double grid = xrsched::testing::grid_minmax(s, box, 801);
    const double ref = xrsched::testing::reference_minmax(s, box);
    CHECK(grid >= ref - 1e-6);
    CHECK(grid - ref < 5e-2);
    const auto oracle = xrsched::testing::solve_reference(s, box);
    if (oracle.feasible && oracle.minmax < -1e-4) {
      const double gobj = xrsched::testing::grid_objective(s, box, 801);
      CHECK(gobj >= oracle.objective - 1e-6);
      CHECK(gobj - oracle.objective < 5e-2);
    }
  }
}

TEST_CASE("hopeless constraints are reported infeasible") {
  const int n = 3;
  Eigen::VectorXd anchor = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd f_hat(2);
  f_hat << -1.0, 10.0;
  std::vector<Eigen::VectorXd> g{Eigen::VectorXd::Ones(n), Eigen::VectorXd::Zero(n)};
  Eigen::VectorXd zeta = Eigen::VectorXd::Ones(2);
  const auto s = build_surrogates(anchor, f_hat, g, zeta);
  const ThetaBox box;
  const auto res = solve_objective_update(s, box);
  CHECK(res.status == SubproblemStatus::kInfeasible);
  CHECK(res.theta.size() == 0);
  // The minmax optimum is the anchor itself: 10 + |theta|^2.
  const auto feas = solve_feasible_update(s, box);
  CHECK(feas.minmax == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(feas.theta.lpNorm<Eigen::Infinity>() < 1e-3);
}

TEST_CASE("slack constraints leave the unconstrained minimizer alone") {
  const int n = 2;
  Eigen::VectorXd anchor = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd f_hat(2);
  f_hat << 0.0, -100.0;
  std::vector<Eigen::VectorXd> g{Eigen::VectorXd::Ones(n), Eigen::VectorXd::Ones(n)};
  Eigen::VectorXd zeta(2);
  zeta << 1.0, 1.0;
  const auto s = build_surrogates(anchor, f_hat, g, zeta);
  const ThetaBox box;
  const auto res = solve_objective_update(s, box);
  REQUIRE(res.status == SubproblemStatus::kOk);
  // Minimizer of f0: anchor - g/(2 zeta) = (-0.5, -0.5).
  CHECK(res.theta[0] == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(res.theta[1] == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("theta mixing is the convex combination") {
  Eigen::VectorXd cur(2), tgt(2);
  cur << 1.0, -2.0;
  tgt << 3.0, 2.0;
  const auto mixed = mix_theta(cur, tgt, 0.25);
  CHECK(mixed[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(mixed[1] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(mix_theta(cur, tgt, 1.0) == tgt);
  CHECK_THROWS_AS((void)mix_theta(cur, tgt, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)mix_theta(cur, tgt, 1.5), std::invalid_argument);
}
