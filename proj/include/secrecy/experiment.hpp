#pragma once

// Experiment configuration and seeded channel generation.

#include "secrecy/secrecy_problem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace secrecy {

struct ExperimentConfig {
  int m = 4;   // receive antennas at the legitimate receiver
  int n = 4;   // transmit antennas
  int k = 2;   // eavesdroppers (or primary receivers in pa mode)
  int ne = 1;  // antennas per eavesdropper
  std::vector<double> p_db_grid{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double eps_rate = 1e-3;  // nats
  int trials = 100;
  std::uint64_t seed = 1;
  std::string mode = "secrecy";  // secrecy | pa | bounds
  double gamma = 1.0;            // IT limit of every primary receiver in pa mode
  double sigma2 = 1.0;           // eavesdropper noise variance

  void validate() const;
};

/// 10^(dB / 10); unit noise makes this the SNR.
double db_to_linear(double db);

struct ChannelDraw {
  ComplexMatrix hs;                          // n x m
  std::vector<ComplexMatrix> eavesdroppers;  // each n x ne
};

/// Name of the generator recorded in manifests.
std::string rng_name();

/// CSCG entries with variance 1/2 per real and imaginary part, drawn in a fixed order
/// (Hs column-major, then each eavesdropper) from a generator seeded by (seed, trial).
ChannelDraw gen_channels(const ExperimentConfig& cfg, int trial);

/// 16 hex digits identifying the exact channel values.
std::string channel_digest(const ChannelDraw& draw);

/// Single-antenna instance (uses column 0 of each eavesdropper) at the given power.
SecrecyProblem single_antenna_problem(const ChannelDraw& draw, double sigma2, double power);

/// Multi-antenna instance with noise sigma2 on every eavesdropper antenna.
SecrecyProblem multi_antenna_problem(const ChannelDraw& draw, double sigma2, double power);

}  // namespace secrecy
