#pragma once

#include <cstdint>

namespace xrsched {

// Diminishing step sizes mu_i = mu0 i^-rho1 (surrogate mixing),
// eta_i = eta0 i^-rho2 (recursive averages), upsilon_i = ups0 i^-rho3
// (network SGD). Convergence needs every exponent in (0.5, 1) and
// rho2 < rho1; the relaxed flag admits historical settings outside
// that range for comparison runs.
struct StepSchedule {
  double mu0 = 0.5;
  double eta0 = 1.0;
  double upsilon0 = 2e-3;
  double rho1 = 0.7;
  double rho2 = 0.6;
  double rho3 = 0.55;

  void validate(bool relaxed = false) const;
};

struct StepSizes {
  double mu = 0.0;
  double eta = 0.0;
  double upsilon = 0.0;
};

StepSizes step_sizes(std::int64_t iteration, const StepSchedule& schedule);

}  // namespace xrsched
