#pragma once

// Bounds for eavesdroppers with several antennas. The lower bound replaces each
// leakage log det(I + G^H S G) by L log(1 + tr(G^H S G) / L), L = min(N_e, N), and
// runs the level search with trace IT constraints. The upper bound lets every
// eavesdropper antenna decode on its own and solves the single-antenna problem.

#include "secrecy/algorithms.hpp"

namespace secrecy {

struct BoundsResult {
  double lower_bound = 0.0;      // nats
  double achievable_rate = 0.0;  // secrecy rate of s_lower, nats
  double upper_bound = 0.0;      // nats
  ComplexMatrix s_lower;
  SecrecyStatus status = SecrecyStatus::Converged;
  int pa_solves = 0;
};

struct LowerBound {
  double rate = 0.0;
  ComplexMatrix covariance;
  SecrecyStatus status = SecrecyStatus::Converged;
  int pa_solves = 0;
};

LowerBound lower_bound_multiantenna(const SecrecyProblem& p, double eps_rate = 1e-3, const LevelOptions& options = {});

/// Single-antenna problem with one eavesdropper per antenna column (noise sigma_ij^2).
SecrecyProblem split_antennas(const SecrecyProblem& p);

SecrecySolution upper_bound_multiantenna(const SecrecyProblem& p, double eps_rate = 1e-3,
                                         const LevelOptions& options = {});

BoundsResult bounds(const SecrecyProblem& p, double eps_rate = 1e-3, const LevelOptions& options = {});

}  // namespace secrecy
