#pragma once

// Level search over IT limits: maximize min_i g(Gamma) / d_i(Gamma_i) by bisection
// on the level t. Each level is settled by a feasibility test that returns a
// witness Gamma or an infeasibility certificate. The dual search over nu finds
// witnesses and candidate multipliers; certificates are then verified by a
// branch and bound over Gamma boxes that only uses monotonicity of g and d_i,
// since g itself need not be concave.

#include "secrecy/cr_solver.hpp"
#include "secrecy/secrecy_problem.hpp"

#include <memory>
#include <vector>

namespace secrecy {

/// Convex increasing denominator with d(0) = 1: (1 + Gamma/scale)^power.
/// power = 1 gives the single-antenna form 1 + Gamma/sigma^2.
struct Denominator {
  double scale = 1.0;
  double power = 1.0;

  double value(double gamma) const;
  double log_value(double gamma) const;
  double derivative(double gamma) const;
  /// Smallest Gamma >= 0 with value(Gamma) >= v (0 for v <= 1).
  double inverse(double v) const;
};

struct LevelProblem {
  CrChannels channels;
  std::vector<Denominator> denominators;  // one per PU channel
  RealVector gamma_cap;                   // P * lambda_max(G_i G_i^H): limit i never binds beyond it
  double log_g_inf = 0.0;                 // log g with every limit removed
  ComplexMatrix unconstrained;            // its optimal covariance

  LevelProblem(CrChannels channels, std::vector<Denominator> denominators, const CrOptions& pa = {});
  /// Single-antenna eavesdroppers with d_i = 1 + Gamma_i / sigma_i^2.
  static LevelProblem from_secrecy(const SecrecyProblem& p, const CrOptions& pa = {});
  std::size_t size() const { return denominators.size(); }
};

struct LevelOptions {
  double eps_rate = 1e-3;       // bisection stops when log(t_max / t_min) <= eps_rate
  double witness_tol = 1e-8;    // constraint slack accepted for a feasibility witness
  double certificate_tol = 1e-10;
  int inner_iterations = 200;   // gradient ascent steps per nu
  int outer_iterations = 60;    // cuts on nu per level
  int max_levels = 200;
  int max_boxes = 20000;        // box splits per level test
  CrOptions pa{1e-9, 500, 40, std::nullopt};
};

enum class Verdict { Feasible, Infeasible, Indeterminate };

enum class CertificateKind {
  None,
  Dual,      // nu on the simplex with f0(nu) < 0
  BoxCover,  // every box of a cover of the Gamma range has some i with g < t d_i
};

std::string to_string(Verdict verdict);

struct FeasibilityOutcome {
  Verdict verdict = Verdict::Indeterminate;
  RealVector witness;     // Gamma with g(Gamma) >= t d_i(Gamma_i) (Feasible)
  double witness_log_f = 0.0;  // log min_i g / d_i at the witness
  RealVector nu;          // simplex weights; f0(nu) < 0 certifies infeasibility
  double f0_value = 0.0;  // upper bound on f0(nu) / t for the reported nu
  CertificateKind certificate = CertificateKind::None;
  int boxes = 0;          // leaves in the box tree when the verdict was reached
  ComplexMatrix covariance;  // spectrum-sharing optimum at the witness
  DualCertificate pa_dual;
  int pa_solves = 0;
  bool pa_failures = false;
};

struct BoxTree;

/// Working state reused across levels (warm starts and the box tree).
struct LevelState {
  RealVector gamma;
  RealVector nu;
  std::optional<DualCertificate> dual;
  std::shared_ptr<BoxTree> tree;
};

/// Settles level t (log scale) for the problem.
FeasibilityOutcome check_level(const LevelProblem& p, double log_t, const LevelOptions& options,
                               LevelState* state = nullptr);

struct LevelResult {
  double log_t_min = 0.0;
  double log_t_max = 0.0;
  RealVector gamma;          // incumbent Gamma
  double log_f = 0.0;        // log min_i g / d_i at the incumbent
  ComplexMatrix covariance;  // spectrum-sharing optimum at the incumbent
  int levels = 0;
  int pa_solves = 0;
  SecrecyStatus status = SecrecyStatus::Converged;
};

/// Bisection from [log g(0), log g(inf)].
LevelResult level_search(const LevelProblem& p, const LevelOptions& options);

/// log min_i g(Gamma) / d_i(Gamma_i) with the spectrum-sharing solution at Gamma.
double log_objective(const LevelProblem& p, const GEvaluation& g, const RealVector& gamma);

}  // namespace secrecy
