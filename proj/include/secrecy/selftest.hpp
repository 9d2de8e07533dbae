#pragma once

// Invariant suites of every module at small sizes (N <= 4), one line per property.

#include <cstdint>
#include <string>
#include <vector>

namespace secrecy {

struct SelftestOptions {
  std::uint64_t seed = 1;
  /// Negative control: scales the analytic gradient by 1.1 before the finite-difference check.
  bool corrupt_gradient = false;
};

struct PropertyReport {
  std::string name;
  bool pass = false;
  double worst = 0.0;      // largest residual seen
  double threshold = 0.0;  // pass when worst <= threshold
};

std::vector<PropertyReport> selftest(const SelftestOptions& options = {});

/// "PASS name worst=... threshold=..." lines.
std::string format_report(const std::vector<PropertyReport>& reports);

}  // namespace secrecy
