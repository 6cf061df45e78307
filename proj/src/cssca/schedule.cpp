#include "xrsched/cssca/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace xrsched {

void StepSchedule::validate(bool relaxed) const {
  if (!(mu0 > 0.0 && mu0 <= 1.0)) {
    throw std::invalid_argument("schedule: need 0 < mu0 <= 1");
  }
  if (!(eta0 > 0.0 && eta0 <= 1.0)) {
    throw std::invalid_argument("schedule: need 0 < eta0 <= 1");
  }
  if (!(upsilon0 > 0.0)) throw std::invalid_argument("schedule: need upsilon0 > 0");
  for (double r : {rho1, rho2, rho3}) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw std::invalid_argument("schedule: exponents must lie in (0, 1]");
    }
  }
  if (relaxed) return;
  for (double r : {rho1, rho2, rho3}) {
    if (!(r > 0.5 && r < 1.0)) {
      throw std::invalid_argument("schedule: exponents must lie in (0.5, 1)");
    }
  }
  if (!(rho2 < rho1)) {
    throw std::invalid_argument("schedule: averaging must decay slower than mixing (rho2 < rho1)");
  }
}

StepSizes step_sizes(std::int64_t iteration, const StepSchedule& schedule) {
  if (iteration < 1) throw std::invalid_argument("schedule: iteration must be >= 1");
  const double i = static_cast<double>(iteration);
  StepSizes s;
  s.mu = schedule.mu0 * std::pow(i, -schedule.rho1);
  s.eta = schedule.eta0 * std::pow(i, -schedule.rho2);
  s.upsilon = schedule.upsilon0 * std::pow(i, -schedule.rho3);
  return s;
}

}  // namespace xrsched
