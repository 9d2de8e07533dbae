#pragma once

// Reference methods for validation: the zero-forcing P-SVD rate, brute-force
// projected-gradient solvers for small instances, and finite differences.

#include "secrecy/cr_solver.hpp"
#include "secrecy/secrecy_problem.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace secrecy {

struct OracleConfig {
  int restarts = 8;
  int max_iters = 3000;
  std::string step_rule = "armijo";  // "armijo" (backtracking) or "diminishing" (c / sqrt(k))
  std::uint64_t seed = 1;

  void validate() const;
};

struct PsvdResult {
  ComplexMatrix covariance;
  double rate = 0.0;  // nats
};

/// Nulls every eavesdropper direction by projecting Hs onto the orthogonal complement
/// of all eavesdropper columns, then water-fills the full budget over the projected channel.
PsvdResult p_svd_rate(const SecrecyProblem& p);

/// Budgeted water-filling: p_k = max(0, level - 1/g_k) with sum p_k = budget within 1e-9 budget.
RealVector budget_waterfill(const RealVector& gains, double budget);

/// Multi-start projected gradient ascent of the secrecy rate over {S >= 0, tr S <= P}.
/// A lower-bound oracle: returns the best rate found (0 if no start improves on S = 0).
double brute_force_secrecy(const SecrecyProblem& p, const OracleConfig& cfg = {});

/// Multi-start projected gradient on the spectrum-sharing objective. The projection onto
/// the power, IT and PSD sets is exact (solved through its small multiplier problem).
/// Returns the capacity of the best feasible iterate.
double brute_force_pa(const CrProblem& p, const OracleConfig& cfg = {});

/// Central differences per coordinate; forward difference where x_i - h < 0.
RealVector finite_diff_grad(const std::function<double(const RealVector&)>& f, const RealVector& x, double h);

}  // namespace secrecy
