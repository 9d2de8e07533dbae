#pragma once

#include "secrecy/level_search.hpp"
#include "secrecy/secrecy_problem.hpp"

namespace secrecy {

/// Secrecy capacity with single-antenna eavesdroppers by bisection over the level t,
/// each level settled by `feasibility_check`. `eps_rate` bounds log(t_max / t_min) at exit.
SecrecySolution algorithm1(const SecrecyProblem& p, double eps_rate = 1e-3, const LevelOptions& options = {});

/// Level test at determinant-scale t: a witness Gamma with g(Gamma) >= t (1 + Gamma_i / sigma_i^2)
/// for all i, or nu on the simplex with f0(nu) < 0.
FeasibilityOutcome feasibility_check(double t, const SecrecyProblem& p, const LevelOptions& options = {});

struct Algorithm2Options {
  double gamma_rel_tol = 1e-9;  // bisection width relative to the upper end of the Gamma range
  int max_iterations = 200;
  CrOptions pa{1e-10, 500, 40, std::nullopt};
};

/// Single eavesdropper: bisection on Gamma using the sign of
/// gamma(Gamma) (1 + Gamma / sigma^2) - g(Gamma) / sigma^2.
SecrecySolution algorithm2(const SecrecyProblem& p, double eps_rate = 1e-3, const Algorithm2Options& options = {});

struct MisoOptions {
  int ascent_iterations = 400;   // supergradient steps per level
  int polish_iterations = 4000;  // extra steps at the final level
  double slack_tol = 1e-9;
};

struct MisoSolution {
  SecrecySolution solution;
  double eigen_ratio = 0.0;  // lambda_2 / lambda_1 of the returned covariance
};

/// Single receive antenna (Hs is N x 1): bisection on t with a semidefinite feasibility
/// test per level, max over S of min_i [1 + hs^H S hs - t (1 + h_i^H S h_i / sigma_i^2)].
MisoSolution miso_solve(const SecrecyProblem& p, double eps_rate = 1e-3, const MisoOptions& options = {});

}  // namespace secrecy
