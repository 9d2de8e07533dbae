#pragma once

// Channel files (JSON):
//   {"Hs": ..., "eavesdroppers": [...], "sigma2": [...], "P": 3.16, "Gamma": [...]}
// A matrix is either nested rows [[[re, im], ...], ...] or a flat row-major list of
// [re, im] pairs. A flat eavesdropper is a column vector and fixes N, which then
// shapes a flat Hs. sigma2 holds one number per eavesdropper or one list per
// eavesdropper antenna. Gamma (optional) gives IT limits for solve-pa.

#include "secrecy/secrecy_problem.hpp"

#include <optional>
#include <string>

namespace secrecy {

struct ChannelFile {
  ComplexMatrix hs;
  std::vector<ComplexMatrix> eavesdroppers;
  std::vector<RealVector> sigma2;
  double power = 0.0;
  std::optional<RealVector> gamma;

  /// True when some eavesdropper has more than one antenna.
  bool multi_antenna() const;
  SecrecyProblem problem() const;
  /// Same instance with the given antenna mode (multi-antenna accepts N_e = 1).
  SecrecyProblem problem(AntennaMode mode) const;
};

ChannelFile parse_channels(const std::string& text);
ChannelFile read_channel_file(const std::string& path);
/// Nested-row form, readable by parse_channels.
std::string format_channels(const ChannelFile& file);

}  // namespace secrecy
