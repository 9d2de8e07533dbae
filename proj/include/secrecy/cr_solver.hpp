#pragma once

// Spectrum-sharing capacity under a transmit power budget and interference
// temperature (IT) limits at primary receivers:
//
//   max_S  log det(I + Hs^H S Hs)   s.t.  tr S <= P,  tr(G_i^H S G_i) <= Gamma_i,  S >= 0.
//
// For a single-antenna receiver G_i is the N x 1 vector h_i and the constraint is
// h_i^H S h_i <= Gamma_i. Solved through the Lagrange dual over (lambda, mu) with
// the inner maximization in closed form (whitening plus water-filling). The dual
// is minimized by projected Newton steps, falling back to the ellipsoid method
// when Newton stalls. Both stop on a duality gap certificate.

#include "secrecy/hermitian.hpp"

#include <optional>
#include <vector>

namespace secrecy {

/// Channels of a spectrum-sharing instance, without the IT limits.
struct CrChannels {
  ComplexMatrix hs;                        // N x M
  std::vector<ComplexMatrix> pu_channels;  // each N x n_i
  double power = 0.0;                      // linear

  Eigen::Index tx_antennas() const { return hs.rows(); }
  std::size_t constraint_count() const { return pu_channels.size(); }
  void validate() const;
};

struct CrProblem {
  CrChannels channels;
  RealVector it_limits;  // one per PU channel; +infinity removes the constraint

  void validate() const;
};

enum class SolveStatus { Converged, MaxIterations };

/// Multipliers for tr S <= P (lambda) and each IT limit (mu_i). A limit treated
/// as exactly zero reports mu_i = +infinity.
struct DualCertificate {
  double lambda = 0.0;
  RealVector mu;
};

struct CrSolution {
  ComplexMatrix covariance;
  double capacity = 0.0;    // nats, attained by `covariance`
  double dual_value = 0.0;  // nats, upper bound on the optimum
  DualCertificate dual;
  double kkt_residual = 0.0;
  int iterations = 0;      // Newton steps plus ellipsoid iterations
  int dual_evaluations = 0;
  SolveStatus status = SolveStatus::Converged;

  double duality_gap() const { return dual_value - capacity; }
};

struct CrOptions {
  double tol = 1e-6;  // duality gap, nats
  int max_iterations = 500;  // ellipsoid iterations
  /// Damped Newton steps on the dual before falling back to the ellipsoid search.
  /// Zero runs the ellipsoid search alone.
  int newton_iterations = 40;
  /// Starting multipliers for the Newton phase, e.g. from a nearby solve.
  std::optional<DualCertificate> warm_start;
};

/// tr(G^H S G); equals h^H S h for a column vector.
double received_power(const ComplexMatrix& g, const ComplexMatrix& s);

CrSolution solve_pa(const CrProblem& problem, const CrOptions& options = {});

/// g(Gamma) in log scale together with the multipliers that give its gradient.
struct GEvaluation {
  double log_g = 0.0;        // log of the attained determinant
  double log_g_upper = 0.0;  // dual bound on log g
  RealVector mu;             // d g / d Gamma_i = mu_i * g
  CrSolution solution;

  double value() const;
  RealVector gradient() const;
};

GEvaluation evaluate_g(const CrChannels& channels, const RealVector& limits, const CrOptions& options = {});

/// g(Gamma) = max det(I + Hs^H S Hs) over the CR feasible set (determinant scale, >= 1).
double eval_g(const CrChannels& channels, const RealVector& limits, const CrOptions& options = {});

/// gamma_i = mu_i * g(Gamma).
RealVector grad_g(const CrChannels& channels, const RealVector& limits, const CrOptions& options = {});

}  // namespace secrecy
