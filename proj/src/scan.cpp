#include "secrecy/scan.hpp"

#include "secrecy/sweep.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace secrecy {

double axis_value(const ScanResult& s, int axis, int index) {
  return s.points > 1 ? s.gamma_bar(axis) * index / (s.points - 1) : 0.0;
}

bool is_unimodal(const std::vector<double>& values, double tol, double* worst) {
  // Track the deepest fall so far; any later rise beyond tol breaks unimodality.
  double peak = -std::numeric_limits<double>::infinity();
  double trough = std::numeric_limits<double>::infinity();
  bool falling = false;
  double bad = 0.0;
  for (double v : values) {
    if (!falling) {
      if (v < peak - tol) {
        falling = true;
        trough = v;
      }
      peak = std::max(peak, v);
    } else {
      trough = std::min(trough, v);
      bad = std::max(bad, v - trough - tol);
    }
  }
  if (worst) *worst = std::max(0.0, bad);
  return bad <= 0.0;
}

bool rows_contiguous(const std::vector<double>& grid, int rows, int cols, int levels, double tol, double* worst) {
  const auto [lo_it, hi_it] = std::minmax_element(grid.begin(), grid.end());
  double bad = 0.0;
  for (int l = 1; l <= levels; ++l) {
    const double alpha = *lo_it + (*hi_it - *lo_it) * l / (levels + 1.0);
    for (int r = 0; r < rows; ++r) {
      const double* row = grid.data() + static_cast<std::ptrdiff_t>(r) * cols;
      int first = -1;
      int last = -1;
      for (int c = 0; c < cols; ++c) {
        if (row[c] >= alpha) {
          if (first < 0) first = c;
          last = c;
        }
      }
      for (int c = first + 1; first >= 0 && c < last; ++c) bad = std::max(bad, alpha - row[c] - tol);
    }
  }
  if (worst) *worst = std::max(0.0, bad);
  return bad <= 0.0;
}

ScanResult scan_surface(const ExperimentConfig& cfg, double p_db, int trial, int points, bool parallel) {
  cfg.validate();
  if (cfg.k != 1 && cfg.k != 2) throw std::invalid_argument("scan: one or two eavesdroppers required");
  if (points < 2) throw std::invalid_argument("scan: at least two points per axis");
  const auto t0 = std::chrono::steady_clock::now();
  const ChannelDraw draw = gen_channels(cfg, trial);
  const SecrecyProblem p = single_antenna_problem(draw, cfg.sigma2, db_to_linear(p_db));
  const CrChannels ch = cr_channels(p);
  const CrOptions pa{1e-9, 500, 40, std::nullopt};

  ScanResult out;
  out.k = cfg.k;
  out.points = points;
  const GEvaluation top = evaluate_g(ch, RealVector::Constant(cfg.k, std::numeric_limits<double>::infinity()), pa);
  out.gamma_bar.resize(cfg.k);
  for (int i = 0; i < cfg.k; ++i) out.gamma_bar(i) = received_power(ch.pu_channels[static_cast<std::size_t>(i)], top.solution.covariance);

  const int rows = cfg.k == 1 ? 1 : points;
  out.log_f.assign(static_cast<std::size_t>(rows) * points, 0.0);
  int failures = 0;
  // One row per task; each row warm-starts along its own sweep.
#pragma omp parallel for schedule(dynamic) reduction(+ : failures) if (parallel)
  for (int r = 0; r < rows; ++r) {
    CrOptions opts = pa;
    for (int c = 0; c < points; ++c) {
      RealVector gamma(cfg.k);
      if (cfg.k == 1) {
        gamma(0) = axis_value(out, 0, c);
      } else {
        gamma(0) = axis_value(out, 0, r);
        gamma(1) = axis_value(out, 1, c);
      }
      const GEvaluation g = evaluate_g(ch, gamma, opts);
      if (g.log_g_upper - g.log_g > 1e-6) ++failures;
      bool finite = true;
      for (Eigen::Index i = 0; i < g.solution.dual.mu.size(); ++i) finite = finite && std::isfinite(g.solution.dual.mu(i));
      if (finite) opts.warm_start = g.solution.dual;
      double worst = 0.0;
      for (int i = 0; i < cfg.k; ++i) worst = std::max(worst, std::log1p(gamma(i) / p.sigma2(static_cast<std::size_t>(i))));
      out.log_f[static_cast<std::size_t>(r) * points + c] = g.log_g - worst;
    }
  }
  out.pa_failures = failures;
  constexpr double kTol = 1e-9;
  if (cfg.k == 1) {
    out.verdict_kind = "unimodal";
    out.verdict = is_unimodal(out.log_f, kTol, &out.worst_violation);
  } else {
    out.verdict_kind = "row_contiguous_superlevel";
    out.verdict = rows_contiguous(out.log_f, points, points, 25, kTol, &out.worst_violation);
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

void write_scan_csv(std::ostream& out, const ScanResult& s) {
  out << (s.k == 1 ? "gamma1,F,log_F\n" : "gamma1,gamma2,F,log_F\n");
  const int rows = s.k == 1 ? 1 : s.points;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < s.points; ++c) {
      const double lf = s.log_f[static_cast<std::size_t>(r) * s.points + c];
      if (s.k == 1) {
        out << format_number(axis_value(s, 0, c));
      } else {
        out << format_number(axis_value(s, 0, r)) << ',' << format_number(axis_value(s, 1, c));
      }
      out << ',' << format_number(std::exp(lf)) << ',' << format_number(lf) << '\n';
    }
  }
}

std::string scan_manifest(const ExperimentConfig& cfg, double p_db, int trial, const ScanResult& s) {
  using nlohmann::json;
  const ChannelDraw draw = gen_channels(cfg, trial);
  json m{{"config", {{"m", cfg.m}, {"n", cfg.n}, {"k", cfg.k}, {"seed", cfg.seed}, {"sigma2", cfg.sigma2}}},
         {"p_db", p_db},
         {"trial", trial},
         {"points", s.points},
         {"digest", channel_digest(draw)},
         {"version", code_version()},
         {"rng", rng_name()},
         {"gamma_bar", std::vector<double>(s.gamma_bar.data(), s.gamma_bar.data() + s.gamma_bar.size())},
         {"verdict_kind", s.verdict_kind},
         {"verdict", s.verdict},
         {"worst_violation", s.worst_violation},
         {"pa_failures", s.pa_failures},
         {"wall_seconds", s.wall_seconds}};
  return m.dump(2);
}

}  // namespace secrecy
