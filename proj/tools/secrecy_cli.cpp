// Command-line front end: single solves, sweeps, surface scans and the self-test.

#include "secrecy/baselines.hpp"
#include "secrecy/bounds.hpp"
#include "secrecy/channel_io.hpp"
#include "secrecy/scan.hpp"
#include "secrecy/selftest.hpp"
#include "secrecy/sweep.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace secrecy;
using nlohmann::json;

namespace {

struct Flags {
  ExperimentConfig cfg;
  double p_db = 5.0;
  std::string grid;
  std::string out;
  std::string channels;
  std::string method = "alg1";
  bool bits = false;
  bool serial = false;
  bool corrupt_gradient = false;
  int trial = 0;
  int points = 50;
  std::vector<double> gamma;
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    // start:stop[:step]
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("--p-db-grid: expected start:stop[:step]");
    const double step = parts.size() == 3 ? parts[2] : 1.0;
    if (!(step > 0.0)) throw std::invalid_argument("--p-db-grid: step must be positive");
    for (int i = 0; parts[0] + i * step <= parts[1] + 1e-9; ++i) out.push_back(parts[0] + i * step);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(std::stod(item));
    }
  }
  if (out.empty()) throw std::invalid_argument("--p-db-grid: no values");
  return out;
}

double shown(double nats, bool bits) { return bits ? nats / std::log(2.0) : nats; }

json vec(const RealVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v(i))) {
      a.push_back(v(i));
    } else {
      a.push_back(nullptr);
    }
  }
  return a;
}

// Instance from --channels, or a seeded draw of the configured sizes at --p-db.
ChannelFile instance(const Flags& f, bool multi) {
  if (!f.channels.empty()) return read_channel_file(f.channels);
  ExperimentConfig cfg = f.cfg;
  if (!multi) cfg.ne = 1;
  const ChannelDraw draw = gen_channels(cfg, f.trial);
  ChannelFile file;
  file.hs = draw.hs;
  file.eavesdroppers = draw.eavesdroppers;
  for (const auto& e : draw.eavesdroppers) file.sigma2.push_back(RealVector::Constant(e.cols(), cfg.sigma2));
  file.power = db_to_linear(f.p_db);
  return file;
}

std::string describe_source(const Flags& f, const ChannelFile& file) {
  if (!f.channels.empty()) return f.channels;
  ChannelDraw draw{file.hs, file.eavesdroppers};
  return "seed " + std::to_string(f.cfg.seed) + " trial " + std::to_string(f.trial) + " digest " + channel_digest(draw);
}

struct Row {
  std::string method;
  double rate = 0.0;
  std::string status;
  int iterations = 0;
  int pa_solves = 0;
  double seconds = 0.0;
};

void write_rows(const Flags& f, const std::string& command, const std::vector<Row>& rows, const json& extra) {
  if (f.out.empty()) return;
  std::ofstream csv(f.out, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write " + f.out);
  csv << "command,method,rate_nats,rate_bits,status,iterations,pa_solves\n";
  for (const auto& r : rows) {
    csv << command << ',' << r.method << ',' << format_number(r.rate) << ',' << format_number(r.rate / std::log(2.0))
        << ',' << r.status << ',' << r.iterations << ',' << r.pa_solves << '\n';
  }
  json m = extra;
  m["command"] = command;
  m["version"] = code_version();
  json timing = json::object();
  for (const auto& r : rows) timing[r.method] = r.seconds;
  m["seconds"] = timing;
  std::ofstream man(f.out + ".manifest.json", std::ios::binary);
  man << m.dump(2) << '\n';
}

template <class Fn>
double timed(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_solve_pa(const Flags& f) {
  const ChannelFile file = instance(f, true);
  CrProblem p;
  p.channels.hs = file.hs;
  p.channels.power = file.power;
  p.channels.pu_channels = file.eavesdroppers;
  const auto k = static_cast<Eigen::Index>(file.eavesdroppers.size());
  if (!f.gamma.empty()) {
    if (static_cast<Eigen::Index>(f.gamma.size()) != k && f.gamma.size() != 1) {
      throw std::invalid_argument("--gamma: give one value or one per primary receiver");
    }
    p.it_limits = RealVector(k);
    for (Eigen::Index i = 0; i < k; ++i) p.it_limits(i) = f.gamma.size() == 1 ? f.gamma[0] : f.gamma[static_cast<std::size_t>(i)];
  } else if (file.gamma) {
    p.it_limits = *file.gamma;
  } else {
    p.it_limits = RealVector::Constant(k, f.cfg.gamma);
  }
  CrSolution s;
  const double secs = timed([&] { s = solve_pa(p, CrOptions{1e-9, 500, 40, std::nullopt}); });
  RealVector leak(k);
  for (Eigen::Index i = 0; i < k; ++i) leak(i) = received_power(p.channels.pu_channels[static_cast<std::size_t>(i)], s.covariance);
  json j{{"source", describe_source(f, file)},
         {"units", f.bits ? "bits" : "nats"},
         {"capacity", shown(s.capacity, f.bits)},
         {"dual_value", shown(s.dual_value, f.bits)},
         {"duality_gap_nats", s.duality_gap()},
         {"lambda", s.dual.lambda},
         {"mu", vec(s.dual.mu)},
         {"it_limits", vec(p.it_limits)},
         {"received_power", vec(leak)},
         {"trace", s.covariance.trace().real()},
         {"power", p.channels.power},
         {"kkt_residual", s.kkt_residual},
         {"iterations", s.iterations},
         {"status", s.status == SolveStatus::Converged ? "converged" : "max_iterations"}};
  std::cout << j.dump(2) << '\n';
  write_rows(f, "solve-pa", {{"pa", s.capacity, j["status"], s.iterations, 1, secs}}, {{"result", j}});
  return 0;
}

json solution_json(const SecrecySolution& s, bool bits) {
  json b = json::array();
  for (auto i : s.binding) b.push_back(i);
  return {{"secrecy_rate", shown(s.secrecy_rate, bits)},
          {"log_t_star", shown(std::log(s.t_star), bits)},
          {"gamma_star", vec(s.gamma_star)},
          {"leakage", vec(bits ? RealVector(s.per_eav_leakage / std::log(2.0)) : s.per_eav_leakage)},
          {"binding", b},
          {"trace", s.covariance.trace().real()},
          {"iterations", s.iterations},
          {"pa_solves", s.pa_solves},
          {"status", to_string(s.status)}};
}

int run_secrecy(const Flags& f) {
  const ChannelFile file = instance(f, false);
  const SecrecyProblem p = file.problem(AntennaMode::SingleAntenna);
  std::vector<std::string> methods;
  if (f.method == "all") {
    methods = {"alg1", "psvd"};
    if (p.eavesdropper_count() == 1) methods.push_back("alg2");
    if (p.hs.cols() == 1) methods.push_back("miso");
  } else {
    methods = {f.method};
  }
  json j{{"source", describe_source(f, file)}, {"units", f.bits ? "bits" : "nats"}, {"eps_rate", f.cfg.eps_rate}};
  std::vector<Row> rows;
  for (const auto& m : methods) {
    Row row{m};
    json r;
    if (m == "psvd") {
      PsvdResult ps;
      row.seconds = timed([&] { ps = p_svd_rate(p); });
      row.rate = ps.rate;
      row.status = "converged";
      r = {{"secrecy_rate", shown(ps.rate, f.bits)}};
    } else {
      SecrecySolution s;
      double ratio = -1.0;
      row.seconds = timed([&] {
        if (m == "alg1") {
          s = algorithm1(p, f.cfg.eps_rate);
        } else if (m == "alg2") {
          s = algorithm2(p, f.cfg.eps_rate);
        } else if (m == "miso") {
          const MisoSolution ms = miso_solve(p, f.cfg.eps_rate);
          s = ms.solution;
          ratio = ms.eigen_ratio;
        } else {
          throw std::invalid_argument("--method: expected alg1, alg2, miso, psvd or all");
        }
      });
      r = solution_json(s, f.bits);
      if (ratio >= 0.0) r["eigen_ratio"] = ratio;
      row.rate = s.secrecy_rate;
      row.status = to_string(s.status);
      row.iterations = s.iterations;
      row.pa_solves = s.pa_solves;
    }
    r["seconds"] = row.seconds;
    j[m] = r;
    rows.push_back(row);
  }
  std::cout << j.dump(2) << '\n';
  write_rows(f, "secrecy", rows, {{"result", j}});
  return 0;
}

int run_bounds(const Flags& f) {
  const ChannelFile file = instance(f, true);
  const SecrecyProblem p = file.problem(AntennaMode::MultiAntenna);
  BoundsResult b;
  const double secs = timed([&] { b = bounds(p, f.cfg.eps_rate); });
  json j{{"source", describe_source(f, file)},
         {"units", f.bits ? "bits" : "nats"},
         {"lower_bound", shown(b.lower_bound, f.bits)},
         {"achievable_rate", shown(b.achievable_rate, f.bits)},
         {"upper_bound", shown(b.upper_bound, f.bits)},
         {"psvd", shown(p_svd_rate(p).rate, f.bits)},
         {"status", to_string(b.status)},
         {"pa_solves", b.pa_solves},
         {"seconds", secs}};
  std::cout << j.dump(2) << '\n';
  const std::string st = to_string(b.status);
  write_rows(f, "bounds",
             {{"lower", b.lower_bound, st, 0, b.pa_solves, secs}, {"achievable", b.achievable_rate, st, 0, 0, 0.0},
              {"upper", b.upper_bound, st, 0, 0, 0.0}},
             {{"result", j}});
  return 0;
}

int run_sweep(const Flags& f) {
  const SweepResult r = sweep(f.cfg, !f.serial);
  if (f.out.empty()) {
    write_sweep_csv(std::cout, r.rows);
  } else {
    write_sweep(f.out, f.cfg, r);
    std::cerr << "wrote " << f.out << " (" << r.rows.size() << " rows, " << format_number(r.wall_seconds) << " s)\n";
  }
  return 0;
}

int run_scan(const Flags& f) {
  const ScanResult s = scan_surface(f.cfg, f.p_db, f.trial, f.points, !f.serial);
  if (f.out.empty()) {
    write_scan_csv(std::cout, s);
  } else {
    std::ofstream csv(f.out, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + f.out);
    write_scan_csv(csv, s);
    std::ofstream man(f.out + ".manifest.json", std::ios::binary);
    man << scan_manifest(f.cfg, f.p_db, f.trial, s) << '\n';
  }
  std::cerr << s.verdict_kind << ": " << (s.verdict ? "holds" : "violated") << " (worst "
            << format_number(s.worst_violation) << ")\n";
  return 0;
}

int run_selftest(const Flags& f) {
  SelftestOptions o;
  o.seed = f.cfg.seed;
  o.corrupt_gradient = f.corrupt_gradient;
  const auto reports = selftest(o);
  std::cout << format_report(reports);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.pass;
  std::cout << (ok ? "all properties hold\n" : "some properties failed\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy capacity with multiple eavesdroppers via spectrum-sharing subproblems"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--m", f.cfg.m, "receive antennas at the legitimate receiver");
    sub->add_option("--n", f.cfg.n, "transmit antennas");
    sub->add_option("--k", f.cfg.k, "eavesdroppers / primary receivers");
    sub->add_option("--ne", f.cfg.ne, "antennas per eavesdropper");
    sub->add_option("--eps", f.cfg.eps_rate, "rate tolerance in nats");
    sub->add_option("--seed", f.cfg.seed, "generator seed");
    sub->add_option("--sigma2", f.cfg.sigma2, "eavesdropper noise variance for generated channels");
    sub->add_option("--out", f.out, "CSV output path; a manifest is written next to it");
    sub->add_flag("--bits", f.bits, "report rates in bits on stdout");
  };
  auto single = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--p-db", f.p_db, "transmit power in dB (unit noise)");
    sub->add_option("--channels", f.channels, "JSON channel file")->check(CLI::ExistingFile);
    sub->add_option("--trial", f.trial, "trial index of the generated instance");
  };

  auto* pa = app.add_subcommand("solve-pa", "spectrum-sharing capacity under IT limits");
  single(pa);
  pa->add_option("--gamma", f.gamma, "IT limit(s); one value or one per receiver");
  auto* sec = app.add_subcommand("secrecy", "secrecy capacity, single-antenna eavesdroppers");
  single(sec);
  sec->add_option("--method", f.method, "alg1 | alg2 | miso | psvd | all");
  auto* bnd = app.add_subcommand("bounds", "lower/achievable/upper for multi-antenna eavesdroppers");
  single(bnd);
  auto* swp = app.add_subcommand("sweep", "power sweep over seeded trials");
  common(swp);
  swp->add_option("--p-db-grid", f.grid, "comma list or start:stop[:step] in dB");
  swp->add_option("--trials", f.cfg.trials, "trials per power point");
  swp->add_option("--mode", f.cfg.mode, "secrecy | pa | bounds");
  swp->add_option("--gamma", f.cfg.gamma, "IT limit in pa mode");
  swp->add_flag("--serial", f.serial, "run the serial reference path");
  auto* scn = app.add_subcommand("scan", "F over a Gamma grid (one or two eavesdroppers)");
  common(scn);
  scn->add_option("--p-db", f.p_db, "transmit power in dB");
  scn->add_option("--points", f.points, "grid points per axis");
  scn->add_option("--trial", f.trial, "trial index of the generated instance");
  scn->add_flag("--serial", f.serial, "evaluate rows serially");
  auto* st = app.add_subcommand("selftest", "run the invariant suites");
  st->add_option("--seed", f.cfg.seed, "generator seed");
  st->add_flag("--corrupt-gradient", f.corrupt_gradient, "negative control: perturb the analytic gradient");

  CLI11_PARSE(app, argc, argv);
  try {
    if (!f.grid.empty()) f.cfg.p_db_grid = parse_grid(f.grid);
    if (!st->parsed()) f.cfg.validate();
    if (pa->parsed()) return run_solve_pa(f);
    if (sec->parsed()) return run_secrecy(f);
    if (bnd->parsed()) return run_bounds(f);
    if (swp->parsed()) return run_sweep(f);
    if (scn->parsed()) return run_scan(f);
    return run_selftest(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
