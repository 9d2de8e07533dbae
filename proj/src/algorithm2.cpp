#include "secrecy/algorithms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace secrecy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
  double gamma = 0.0;
  GEvaluation g;
  double log_f = -kInf;  // log g(Gamma) - log(1 + Gamma / sigma^2)
};

}  // namespace

SecrecySolution algorithm2(const SecrecyProblem& p, double eps_rate, const Algorithm2Options& options) {
  p.validate();
  if (p.mode != AntennaMode::SingleAntenna || p.eavesdropper_count() != 1) {
    throw std::invalid_argument("algorithm2: exactly one single-antenna eavesdropper required");
  }
  if (!(eps_rate > 0.0)) throw std::invalid_argument("algorithm2: eps must be positive");
  const CrChannels ch = cr_channels(p);
  const double s2 = p.sigma2(0);
  int solves = 0;
  bool alarm = false;
  CrOptions pa = options.pa;

  auto eval = [&](double gamma) {
    Point pt;
    pt.gamma = gamma;
    pt.g = evaluate_g(ch, RealVector::Constant(1, gamma), pa);
    ++solves;
    if (pt.g.log_g_upper - pt.g.log_g > 1e-6) alarm = true;
    if (std::isfinite(pt.g.solution.dual.mu(0))) pa.warm_start = pt.g.solution.dual;
    pt.log_f = pt.g.log_g - std::log1p(gamma / s2);
    return pt;
  };

  // Received power at the eavesdropper under the unconstrained optimum: no larger
  // limit changes g.
  const Point top = eval(kInf);
  const double gamma_bar = received_power(ch.pu_channels[0], top.g.solution.covariance);
  Point best = eval(0.0);
  int iterations = 0;
  if (gamma_bar > 1e-12 * (1.0 + ch.power)) {
    Point hi_pt = eval(gamma_bar);
    if (hi_pt.log_f > best.log_f) best = hi_pt;
    double lo = 0.0;
    double hi = gamma_bar;
    while (iterations < options.max_iterations && hi - lo > options.gamma_rel_tol * gamma_bar) {
      ++iterations;
      const double mid = 0.5 * (lo + hi);
      const Point pt = eval(mid);
      if (pt.log_f > best.log_f) best = pt;
      const double mu = pt.g.solution.dual.mu(0);
      // d/dGamma log F has the sign of mu (1 + Gamma / sigma^2) - 1 / sigma^2.
      const double sign = std::isfinite(mu) ? mu * (1.0 + mid / s2) - 1.0 / s2 : 1.0;
      if (sign > 0.0) {
        lo = mid;
      } else {
        hi = mid;
        hi_pt = pt;
      }
      // g is increasing, so log F <= log g(hi) - log d(lo) on the bracket.
      const double cap = hi_pt.g.log_g_upper - std::log1p(lo / s2);
      if (cap - best.log_f <= 1e-3 * eps_rate) break;
    }
  } else {
    best = top;
    best.log_f = top.g.log_g;
  }

  SecrecySolution sol = describe_covariance(best.g.solution.covariance, p);
  sol.t_star = std::exp(best.log_f);
  sol.iterations = iterations;
  sol.pa_solves = solves;
  sol.status = alarm ? SecrecyStatus::PaNotConverged : SecrecyStatus::Converged;
  return sol;
}

}  // namespace secrecy
