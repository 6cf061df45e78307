#pragma once

#include <Eigen/Dense>

#include "xrsched/cssca/surrogate.hpp"

namespace xrsched {

// Coordinate-wise box Theta = [lo, hi]^n for the policy parameters.
struct ThetaBox {
  double lo = -10.0;
  double hi = 10.0;
};

struct SolveInfo {
  int dual_iterations = 0;
  double gap = 0.0;            // duality gap bound at termination
  double max_violation = 0.0;  // max_k max(0, f_bar_k) at the returned point
};

enum class SubproblemStatus { kOk, kInfeasible };

struct ObjectiveResult {
  SubproblemStatus status = SubproblemStatus::kOk;
  Eigen::VectorXd theta;  // empty when infeasible
  SolveInfo info;
};

struct FeasibleResult {
  Eigen::VectorXd theta;
  double minmax = 0.0;  // max_k f_bar_k at theta
  SolveInfo info;
};

// min f_bar_0 s.t. f_bar_k <= 0, theta in box. Solved through the Lagrange
// dual: for fixed multipliers the weighted quadratic has one shared curvature
// per coordinate, so the box-projected closed form is the exact primal
// minimizer; the multipliers follow projected supergradient ascent with a
// backtracking step. Declares kInfeasible when the feasibility subproblem's
// optimum is positive (checked first). Throws on dual-ascent non-convergence
// within max_iterations.
ObjectiveResult solve_objective_update(const SurrogateSet& s, const ThetaBox& box,
                                       double tolerance = 1e-6,
                                       int max_iterations = 5000,
                                       double infeasible_margin = 1e-8);

// min_theta max_k f_bar_k over the box, via dual ascent over the probability
// simplex of constraint weights with the same closed-form primal step. Always
// returns a point, never worse than the anchor.
FeasibleResult solve_feasible_update(const SurrogateSet& s, const ThetaBox& box,
                                     double tolerance = 1e-6,
                                     int max_iterations = 5000);

Eigen::VectorXd mix_theta(const Eigen::VectorXd& current,
                          const Eigen::VectorXd& target, double mu);

}  // namespace xrsched
