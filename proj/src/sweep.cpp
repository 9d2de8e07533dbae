#include "secrecy/sweep.hpp"

#include "secrecy/baselines.hpp"
#include "secrecy/bounds.hpp"

#include "json.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

#ifndef SECRECY_VERSION
#define SECRECY_VERSION "unknown"
#endif

namespace secrecy {

namespace {

using Clock = std::chrono::steady_clock;

MethodResult timed(const std::string& name, const std::function<void(MethodResult&)>& body) {
  MethodResult r;
  r.method = name;
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.failed = true;
    r.status = "error";
    r.error = e.what();
    r.rate = std::nan("");
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

void take(MethodResult& r, const SecrecySolution& s) {
  r.rate = s.secrecy_rate;
  r.iterations = s.iterations;
  r.pa_solves = s.pa_solves;
  r.status = to_string(s.status);
  r.failed = s.status == SecrecyStatus::Indeterminate;
}

}  // namespace

std::string code_version() { return SECRECY_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> sweep_methods(const ExperimentConfig& cfg) {
  if (cfg.mode == "pa") return {"pa", "waterfill"};
  if (cfg.mode == "bounds") return {"lower", "achievable", "upper", "psvd"};
  std::vector<std::string> out{"alg1", "psvd"};
  if (cfg.k == 1) out.push_back("alg2");
  if (cfg.m == 1) out.push_back("miso");
  return out;
}

TrialRecord run_trial(const ExperimentConfig& cfg, double p_db, int trial) {
  TrialRecord rec;
  rec.p_db = p_db;
  rec.trial = trial;
  const ChannelDraw draw = gen_channels(cfg, trial);
  rec.digest = channel_digest(draw);
  const double power = db_to_linear(p_db);

  if (cfg.mode == "pa") {
    CrProblem pa;
    pa.channels.hs = draw.hs;
    pa.channels.power = power;
    pa.channels.pu_channels = draw.eavesdroppers;
    for (const char* name : {"pa", "waterfill"}) {
      const bool limited = std::string(name) == "pa";
      rec.methods.push_back(timed(name, [&](MethodResult& r) {
        CrProblem q = pa;
        q.it_limits = RealVector::Constant(cfg.k, limited ? cfg.gamma : std::numeric_limits<double>::infinity());
        const CrSolution s = solve_pa(q, CrOptions{1e-9, 500, 40, std::nullopt});
        r.rate = s.capacity;
        r.iterations = s.iterations;
        r.pa_solves = 1;
        r.status = s.status == SolveStatus::Converged ? "converged" : "max_iterations";
      }));
    }
    return rec;
  }

  if (cfg.mode == "bounds") {
    const SecrecyProblem p = multi_antenna_problem(draw, cfg.sigma2, power);
    BoundsResult b;
    rec.methods.push_back(timed("lower", [&](MethodResult& r) {
      b = bounds(p, cfg.eps_rate);
      r.rate = b.lower_bound;
      r.pa_solves = b.pa_solves;
      r.status = to_string(b.status);
      r.failed = b.status == SecrecyStatus::Indeterminate;
    }));
    MethodResult ach = rec.methods.back();
    ach.method = "achievable";
    ach.rate = ach.error.empty() ? b.achievable_rate : ach.rate;
    MethodResult up = ach;
    up.method = "upper";
    up.rate = ach.error.empty() ? b.upper_bound : ach.rate;
    rec.methods.push_back(ach);
    rec.methods.push_back(up);
    rec.methods.push_back(timed("psvd", [&](MethodResult& r) { r.rate = p_svd_rate(p).rate; }));
    return rec;
  }

  const SecrecyProblem p = single_antenna_problem(draw, cfg.sigma2, power);
  for (const auto& name : sweep_methods(cfg)) {
    rec.methods.push_back(timed(name, [&](MethodResult& r) {
      if (name == "alg1") {
        take(r, algorithm1(p, cfg.eps_rate));
      } else if (name == "alg2") {
        take(r, algorithm2(p, cfg.eps_rate));
      } else if (name == "miso") {
        take(r, miso_solve(p, cfg.eps_rate).solution);
      } else {
        r.rate = p_svd_rate(p).rate;
      }
    }));
  }
  return rec;
}

SweepResult sweep(const ExperimentConfig& cfg, bool parallel) {
  cfg.validate();
  const auto points = static_cast<long>(cfg.p_db_grid.size());
  const long cells = points * cfg.trials;
  SweepResult out;
  out.records.resize(static_cast<std::size_t>(cells));
  const auto t0 = Clock::now();
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long c = 0; c < cells; ++c) {
      out.records[static_cast<std::size_t>(c)] =
          run_trial(cfg, cfg.p_db_grid[static_cast<std::size_t>(c / cfg.trials)], static_cast<int>(c % cfg.trials));
    }
    out.threads = omp_get_max_threads();
  } else {
    for (long c = 0; c < cells; ++c) {
      out.records[static_cast<std::size_t>(c)] =
          run_trial(cfg, cfg.p_db_grid[static_cast<std::size_t>(c / cfg.trials)], static_cast<int>(c % cfg.trials));
    }
  }
  out.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  out.rows = aggregate(cfg, out.records);
  return out;
}

std::vector<SweepRow> aggregate(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records) {
  std::vector<SweepRow> rows;
  const auto methods = sweep_methods(cfg);
  for (std::size_t pi = 0; pi < cfg.p_db_grid.size(); ++pi) {
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      SweepRow row;
      row.p_db = cfg.p_db_grid[pi];
      row.method = methods[mi];
      double sum = 0.0;
      double sq = 0.0;
      for (int t = 0; t < cfg.trials; ++t) {
        const MethodResult& r = records[pi * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t)].methods[mi];
        if (r.failed) ++row.failures;
        if (!r.error.empty()) continue;
        ++row.trials;
        sum += r.rate;
        sq += r.rate * r.rate;
      }
      if (row.trials > 0) {
        row.mean_nats = sum / row.trials;
        if (row.trials > 1) {
          const double var = std::max(0.0, (sq - sum * row.mean_nats) / (row.trials - 1));
          row.std_error = std::sqrt(var / row.trials);
        }
      } else {
        row.mean_nats = std::nan("");
      }
      row.mean_bits = row.mean_nats / std::log(2.0);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "p_db,method,mean_rate_nats,mean_rate_bits,std_error_nats,trials,failures\n";
  for (const auto& r : rows) {
    out << format_number(r.p_db) << ',' << r.method << ',' << format_number(r.mean_nats) << ','
        << format_number(r.mean_bits) << ',' << format_number(r.std_error) << ',' << r.trials << ',' << r.failures
        << '\n';
  }
}

std::string sweep_manifest(const ExperimentConfig& cfg, const SweepResult& result) {
  using nlohmann::json;
  json m;
  m["config"] = {{"m", cfg.m},         {"n", cfg.n},           {"k", cfg.k},           {"ne", cfg.ne},
                 {"p_db_grid", cfg.p_db_grid}, {"eps_rate", cfg.eps_rate}, {"trials", cfg.trials},
                 {"seed", cfg.seed},   {"mode", cfg.mode},     {"gamma", cfg.gamma},   {"sigma2", cfg.sigma2}};
  m["version"] = code_version();
  m["rng"] = rng_name();
  m["threads"] = result.threads;
  m["wall_seconds"] = result.wall_seconds;
  json trials = json::array();
  for (const auto& rec : result.records) {
    json t{{"p_db", rec.p_db}, {"trial", rec.trial}, {"digest", rec.digest}};
    json methods = json::array();
    for (const auto& r : rec.methods) {
      json e{{"method", r.method},       {"seconds", r.seconds}, {"iterations", r.iterations},
             {"pa_solves", r.pa_solves}, {"status", r.status},   {"failed", r.failed}};
      if (std::isfinite(r.rate)) e["rate_nats"] = r.rate;
      if (!r.error.empty()) e["error"] = r.error;
      methods.push_back(e);
    }
    t["methods"] = methods;
    trials.push_back(t);
  }
  m["trials"] = trials;
  return m.dump(2);
}

void write_sweep(const std::string& path, const ExperimentConfig& cfg, const SweepResult& result) {
  std::ofstream csv(path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + path);
  write_sweep_csv(csv, result.rows);
  std::ofstream man(path + ".manifest.json", std::ios::binary);
  if (!man) throw std::runtime_error("cannot write " + path + ".manifest.json");
  man << sweep_manifest(cfg, result) << '\n';
}

}  // namespace secrecy
