#include "xrsched/cssca/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace xrsched {

namespace {

// Shared per-solve view of the surrogates in d = theta - anchor coordinates.
struct DSpace {
  Eigen::MatrixXd grads;  // rows: g_hat_k
  Eigen::VectorXd f_hat;
  Eigen::VectorXd zeta;
  Eigen::VectorXd d_lo, d_hi;

  DSpace(const SurrogateSet& s, const ThetaBox& box) {
    const int n = static_cast<int>(s.anchor.size());
    const int rows = static_cast<int>(s.f_hat.size());
    grads.resize(rows, n);
    for (int k = 0; k < rows; ++k) grads.row(k) = s.g_hat[static_cast<std::size_t>(k)];
    f_hat = s.f_hat;
    zeta = s.zeta;
    d_lo = Eigen::VectorXd::Constant(n, box.lo) - s.anchor;
    d_hi = Eigen::VectorXd::Constant(n, box.hi) - s.anchor;
    for (int j = 0; j < n; ++j) {
      if (d_lo[j] > 0.0) d_lo[j] = 0.0;  // keep the anchor representable
      if (d_hi[j] < 0.0) d_hi[j] = 0.0;
    }
  }

  // Box-constrained minimizer of g . d + c |d|^2 (c > 0): the quadratic is
  // separable with one curvature, so clamping the stationary point is exact.
  Eigen::VectorXd primal(const Eigen::VectorXd& g, double c) const {
    return (-g / (2.0 * c)).cwiseMax(d_lo).cwiseMin(d_hi);
  }

  Eigen::VectorXd values(const Eigen::VectorXd& d) const {
    return f_hat + grads * d + zeta * d.squaredNorm();
  }
};

// Euclidean projection onto the probability simplex (sort-based).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) tau = candidate;
  }
  return (v.array() - tau).max(0.0).matrix();
}

}  // namespace

Eigen::VectorXd mix_theta(const Eigen::VectorXd& current,
                          const Eigen::VectorXd& target, double mu) {
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("mix: mu must be in (0,1]");
  if (current.size() != target.size()) {
    throw std::invalid_argument("mix: dimension mismatch");
  }
  return (1.0 - mu) * current + mu * target;
}

FeasibleResult solve_feasible_update(const SurrogateSet& s, const ThetaBox& box,
                                     double tolerance, int max_iterations) {
  s.validate();
  const int num_k = s.num_constraints();
  if (num_k < 1) {
    throw std::invalid_argument("feasible update: needs at least one constraint");
  }
  const DSpace ds(s, box);
  const Eigen::MatrixXd cg = ds.grads.bottomRows(num_k);
  const Eigen::VectorXd cf = ds.f_hat.tail(num_k);
  const Eigen::VectorXd cz = ds.zeta.tail(num_k);

  auto constraint_values = [&](const Eigen::VectorXd& d) -> Eigen::VectorXd {
    return cf + cg * d + cz * d.squaredNorm();
  };

  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(num_k, 1.0 / num_k);
  double step = 1.0;
  double best_ub = std::numeric_limits<double>::infinity();
  double best_lb = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_d;
  FeasibleResult out;

  auto dual_at = [&](const Eigen::VectorXd& lam, Eigen::VectorXd& d_out,
                     Eigen::VectorXd& vals_out) -> double {
    const double c = lam.dot(cz);
    const Eigen::VectorXd g = cg.transpose() * lam;
    d_out = ds.primal(g, c);
    vals_out = constraint_values(d_out);
    return lam.dot(vals_out);
  };

  Eigen::VectorXd d, vals;
  double lb = dual_at(lambda, d, vals);
  int iter = 0;
  bool monotone = true;
  for (iter = 1; iter <= max_iterations; ++iter) {
    const double ub = vals.maxCoeff();
    if (ub < best_ub) {
      best_ub = ub;
      best_d = d;
    }
    best_lb = std::max(best_lb, lb);
    if (best_ub - best_lb <= tolerance) break;

    bool moved = false;
    if (monotone) {
      double t = step;
      for (int back = 0; back < 40; ++back) {
        Eigen::VectorXd trial = project_simplex(lambda + t * vals);
        Eigen::VectorXd d2, vals2;
        const double lb2 = dual_at(trial, d2, vals2);
        if (lb2 >= lb - 1e-15 * std::max(1.0, std::abs(lb))) {
          lambda.swap(trial);
          d.swap(d2);
          vals.swap(vals2);
          lb = lb2;
          step = t * 1.5;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) monotone = false;  // kinked region: fall back to diminishing steps
    }
    if (!monotone) {
      const double t = 1.0 / std::sqrt(static_cast<double>(iter));
      lambda = project_simplex(lambda + t * vals / std::max(1.0, vals.norm()));
      lb = dual_at(lambda, d, vals);
    }
  }

  // Never return anything worse than the anchor itself.
  const double anchor_value = cf.maxCoeff();
  if (!best_d.size() || best_ub > anchor_value) {
    best_d = Eigen::VectorXd::Zero(s.anchor.size());
    best_ub = anchor_value;
  }
  out.theta = s.anchor + best_d;
  out.minmax = best_ub;
  out.info.dual_iterations = std::min(iter, max_iterations);
  out.info.gap = best_ub - best_lb;
  out.info.max_violation = std::max(0.0, best_ub);
  return out;
}

ObjectiveResult solve_objective_update(const SurrogateSet& s, const ThetaBox& box,
                                       double tolerance, int max_iterations,
                                       double infeasible_margin) {
  s.validate();
  const int num_k = s.num_constraints();
  const DSpace ds(s, box);
  ObjectiveResult out;

  if (num_k == 0) {
    const Eigen::VectorXd d = ds.primal(ds.grads.row(0).transpose(), ds.zeta[0]);
    out.theta = s.anchor + d;
    return out;
  }

  {
    const double feas_tol = std::min(tolerance, 10.0 * infeasible_margin);
    const FeasibleResult feas = solve_feasible_update(s, box, feas_tol, max_iterations);
    if (feas.minmax > infeasible_margin) {
      out.status = SubproblemStatus::kInfeasible;
      out.info = feas.info;
      return out;
    }
  }

  const Eigen::MatrixXd cg = ds.grads.bottomRows(num_k);
  const Eigen::VectorXd cf = ds.f_hat.tail(num_k);
  const Eigen::VectorXd cz = ds.zeta.tail(num_k);

  auto dual_at = [&](const Eigen::VectorXd& lam, Eigen::VectorXd& d_out,
                     Eigen::VectorXd& all_vals) -> double {
    const double c = ds.zeta[0] + lam.dot(cz);
    const Eigen::VectorXd g = ds.grads.row(0).transpose() + cg.transpose() * lam;
    d_out = ds.primal(g, c);
    all_vals = ds.values(d_out);
    return all_vals[0] + lam.dot(all_vals.tail(num_k));
  };

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(num_k);
  Eigen::VectorXd d, vals;
  double dual_value = dual_at(lambda, d, vals);
  double step = 1.0;
  bool monotone = true;

  for (int iter = 1; iter <= max_iterations; ++iter) {
    const double violation = vals.tail(num_k).maxCoeff();
    const double complementarity = std::abs(lambda.dot(vals.tail(num_k)));
    if (violation <= tolerance && complementarity <= tolerance) {
      out.theta = s.anchor + d;
      out.info.dual_iterations = iter;
      out.info.gap = complementarity;
      out.info.max_violation = std::max(0.0, violation);
      return out;
    }

    bool moved = false;
    if (monotone) {
      double t = step;
      for (int back = 0; back < 60; ++back) {
        Eigen::VectorXd trial = (lambda + t * vals.tail(num_k)).cwiseMax(0.0);
        Eigen::VectorXd d2, vals2;
        const double dual2 = dual_at(trial, d2, vals2);
        if (dual2 >= dual_value - 1e-15 * std::max(1.0, std::abs(dual_value))) {
          lambda.swap(trial);
          d.swap(d2);
          vals.swap(vals2);
          dual_value = dual2;
          step = t * 1.5;
          moved = true;
          break;
        }
        t *= 0.5;
      }
      if (!moved) monotone = false;
    }
    if (!monotone) {
      const double scale = std::max(1.0, vals.tail(num_k).norm());
      const double t = 1.0 / std::sqrt(static_cast<double>(iter));
      lambda = (lambda + t * vals.tail(num_k) / scale).cwiseMax(0.0);
      dual_value = dual_at(lambda, d, vals);
    }
  }
  throw std::runtime_error("objective update: dual ascent exceeded iteration cap");
}

}  // namespace xrsched
