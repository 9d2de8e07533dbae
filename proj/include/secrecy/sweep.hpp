#pragma once

// Power sweeps over seeded trials. Every (power, trial) cell is independent; the
// OpenMP kernel and the serial reference fill the same slots and aggregate in a
// fixed order, so both produce identical output.

#include "secrecy/experiment.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace secrecy {

struct MethodResult {
  std::string method;
  double rate = 0.0;  // nats
  double seconds = 0.0;
  int iterations = 0;
  int pa_solves = 0;
  std::string status = "converged";
  bool failed = false;  // threw, or could not settle a level
  std::string error;
};

struct TrialRecord {
  double p_db = 0.0;
  int trial = 0;
  std::string digest;
  std::vector<MethodResult> methods;
};

struct SweepRow {
  double p_db = 0.0;
  std::string method;
  double mean_nats = 0.0;
  double mean_bits = 0.0;
  double std_error = 0.0;  // of the mean, nats
  int trials = 0;          // trials that produced a rate
  int failures = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<TrialRecord> records;  // ordered by (power index, trial)
  double wall_seconds = 0.0;
  int threads = 1;
};

/// Methods run per trial: secrecy -> alg1, psvd (+ alg2 when k = 1, + miso when m = 1);
/// pa -> pa, waterfill; bounds -> lower, achievable, upper, psvd.
std::vector<std::string> sweep_methods(const ExperimentConfig& cfg);

TrialRecord run_trial(const ExperimentConfig& cfg, double p_db, int trial);

/// Runs every (power, trial) cell, in parallel unless `parallel` is false.
SweepResult sweep(const ExperimentConfig& cfg, bool parallel = true);

/// Mean, standard error and failure count per (power, method), in grid then method order.
std::vector<SweepRow> aggregate(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records);

/// "%.12g" formatting used by every CSV writer.
std::string format_number(double v);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// JSON manifest: config, version, generator, per-trial digests, timings and iteration counts.
std::string sweep_manifest(const ExperimentConfig& cfg, const SweepResult& result);

/// Writes `path` and `path`.manifest.json.
void write_sweep(const std::string& path, const ExperimentConfig& cfg, const SweepResult& result);

/// Version string recorded in manifests.
std::string code_version();

}  // namespace secrecy
