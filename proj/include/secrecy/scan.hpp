#pragma once

// F(Gamma) = g(Gamma) / max_i (1 + Gamma_i / sigma^2) sampled on a regular grid of
// [0, Gamma_bar_i], Gamma_bar_i being the received power of eavesdropper i under the
// unconstrained optimum. One or two eavesdroppers.

#include "secrecy/experiment.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace secrecy {

struct ScanResult {
  int k = 1;
  int points = 0;           // per axis
  RealVector gamma_bar;     // axis extents
  std::vector<double> log_f;  // K=1: points values; K=2: row-major, row = Gamma_1 index
  bool verdict = false;     // unimodal (K=1) or row-contiguous superlevel sets (K=2)
  std::string verdict_kind;
  double worst_violation = 0.0;  // in log F; 0 when the verdict holds
  int pa_failures = 0;
  double wall_seconds = 0.0;
};

double axis_value(const ScanResult& s, int axis, int index);

/// Evaluates the surface for trial `trial` of the configuration at p_db.
ScanResult scan_surface(const ExperimentConfig& cfg, double p_db, int trial = 0, int points = 50,
                        bool parallel = true);

/// Single interior maximum: no rise by more than tol after a fall by more than tol.
bool is_unimodal(const std::vector<double>& values, double tol, double* worst = nullptr);

/// For each of `levels` thresholds between min and max, every row's members
/// (value >= alpha) form one interval. Gap points within tol of alpha are tolerated.
bool rows_contiguous(const std::vector<double>& grid, int rows, int cols, int levels, double tol,
                     double* worst = nullptr);

void write_scan_csv(std::ostream& out, const ScanResult& s);
std::string scan_manifest(const ExperimentConfig& cfg, double p_db, int trial, const ScanResult& s);

}  // namespace secrecy
