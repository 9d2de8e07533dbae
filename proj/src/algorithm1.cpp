#include "secrecy/algorithms.hpp"

#include <cmath>
#include <stdexcept>

namespace secrecy {

SecrecySolution algorithm1(const SecrecyProblem& p, double eps_rate, const LevelOptions& options) {
  if (!(eps_rate > 0.0)) throw std::invalid_argument("algorithm1: eps must be positive");
  LevelOptions opts = options;
  opts.eps_rate = eps_rate;
  const LevelProblem lp = LevelProblem::from_secrecy(p, opts.pa);
  const LevelResult res = level_search(lp, opts);
  SecrecySolution sol = describe_covariance(res.covariance, p);
  sol.t_star = std::exp(res.log_t_min);
  sol.iterations = res.levels;
  sol.pa_solves = res.pa_solves + 1;
  sol.status = res.status;
  return sol;
}

FeasibilityOutcome feasibility_check(double t, const SecrecyProblem& p, const LevelOptions& options) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("feasibility_check: t must be positive");
  const LevelProblem lp = LevelProblem::from_secrecy(p, options.pa);
  return check_level(lp, std::log(t), options);
}

}  // namespace secrecy
