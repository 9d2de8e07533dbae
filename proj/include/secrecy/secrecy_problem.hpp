#pragma once

#include "secrecy/cr_solver.hpp"

#include <string>
#include <vector>

namespace secrecy {

enum class AntennaMode { SingleAntenna, MultiAntenna };

/// Wiretap instance: main channel Hs (N x M), eavesdropper channels (N x N_e each,
/// N_e = 1 in single-antenna mode), per-antenna noise variances and power budget.
struct SecrecyProblem {
  ComplexMatrix hs;
  std::vector<ComplexMatrix> eavesdroppers;
  std::vector<RealVector> noise;  // noise[i](j) is the variance at antenna j of eavesdropper i
  double power = 0.0;
  AntennaMode mode = AntennaMode::SingleAntenna;

  static SecrecyProblem single_antenna(ComplexMatrix hs, const std::vector<ComplexVector>& eavesdroppers,
                                       const std::vector<double>& noise_vars, double power);
  /// Unit noise when `noise` is empty.
  static SecrecyProblem multi_antenna(ComplexMatrix hs, std::vector<ComplexMatrix> eavesdroppers, double power,
                                      std::vector<RealVector> noise = {});

  Eigen::Index tx_antennas() const { return hs.rows(); }
  std::size_t eavesdropper_count() const { return eavesdroppers.size(); }
  void validate() const;

  /// Noise variance of a single-antenna eavesdropper.
  double sigma2(std::size_t i) const { return noise[i](0); }

  /// Channel of eavesdropper i with column j divided by sqrt(noise[i](j)), so that the
  /// leakage becomes log det(I + G^H S G) under unit noise.
  ComplexMatrix whitened_eavesdropper(std::size_t i) const;
};

enum class SecrecyStatus {
  Converged,
  Indeterminate,  // a level test could not be settled either way
  PaNotConverged, // an inner spectrum-sharing solve hit its iteration cap
};

std::string to_string(SecrecyStatus status);

struct SecrecySolution {
  ComplexMatrix covariance;
  double secrecy_rate = 0.0;    // nats
  double t_star = 1.0;          // determinant-ratio scale
  RealVector gamma_star;        // received power at each eavesdropper under `covariance`
  RealVector per_eav_leakage;   // nats
  std::vector<std::size_t> binding;  // eavesdroppers within 1e-9 of the minimum rate
  int iterations = 0;           // outer bisection steps
  int pa_solves = 0;
  SecrecyStatus status = SecrecyStatus::Converged;
};

/// Eavesdropper leakage terms under S: log(1 + h^H S h / sigma^2) per single-antenna
/// eavesdropper, log det(I + G^H S G) with whitened G in multi-antenna mode.
RealVector leakage_terms(const ComplexMatrix& s, const SecrecyProblem& p);

/// min_i [log det(I + Hs^H S Hs) - leakage_i(S)]. May be negative.
double secrecy_rate(const ComplexMatrix& s, const SecrecyProblem& p);

/// Fills rate, leakage, gamma_star and binding set from a covariance.
SecrecySolution describe_covariance(const ComplexMatrix& s, const SecrecyProblem& p);

/// Spectrum-sharing channels that share the secrecy instance's responses: each
/// eavesdropper becomes a primary receiver with channel equal to its raw response.
CrChannels cr_channels(const SecrecyProblem& p);

}  // namespace secrecy
