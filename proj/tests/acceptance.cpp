// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "secrecy/baselines.hpp"
#include "secrecy/bounds.hpp"
#include "secrecy/scan.hpp"
#include "secrecy/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

using namespace secrecy;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Rng {
 public:
  explicit Rng(std::uint32_t tag) {
    std::seed_seq seq{20240611u, tag};
    rng_.seed(seq);
  }
  ComplexMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix a(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double re = normal_(rng_);
        a(r, c) = cplx(re, normal_(rng_));
      }
    }
    return a;
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, std::sqrt(0.5)};
};

std::string num(double v) { return format_number(v); }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const CrOptions kTight{1e-10, 500, 40, std::nullopt};

Outcome pa_oracle() {
  Rng rng(1);
  const auto t0 = Clock::now();
  double worst = 0.0;
  double worst_gap = 0.0;
  int binding = 0;
  for (int t = 0; t < 50; ++t) {
    CrProblem p;
    p.channels.hs = rng.matrix(2, 2);
    p.channels.power = 5.0;
    const int k = 1 + t % 2;
    p.it_limits.resize(k);
    for (int i = 0; i < k; ++i) {
      p.channels.pu_channels.push_back(rng.matrix(2, 1));
      p.it_limits(i) = rng.uniform(0.0, 2.0);
    }
    const CrSolution s = solve_pa(p, CrOptions{1e-7, 500, 40, std::nullopt});
    OracleConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(t) + 1;
    worst = std::max(worst, std::abs(s.capacity - brute_force_pa(p, cfg)));
    if (s.status == SolveStatus::Converged) worst_gap = std::max(worst_gap, s.duality_gap());
    if (s.status != SolveStatus::Converged) worst_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) binding += s.dual.mu(i) > 0.0;
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-3 && worst_gap <= 1e-6 && secs < 60.0,
          "max |solve_pa - oracle| = " + num(worst) + " nats, max gap = " + num(worst_gap) + ", binding limits " +
              std::to_string(binding) + ", " + num(secs) + " s"};
}

Outcome gradient() {
  Rng rng(2);
  double worst = 0.0;
  int active = 0;
  int inactive = 0;
  const CrOptions pa{1e-12, 1000, 60, std::nullopt};
  for (int t = 0; t < 50; ++t) {
    CrChannels ch;
    ch.hs = rng.matrix(2, 2);
    ch.power = 5.0;
    ch.pu_channels = {rng.matrix(2, 1), rng.matrix(2, 1)};
    RealVector gamma(2);
    // Cycle through both tight, one slack, both slack.
    gamma(0) = t % 3 == 2 ? 50.0 : rng.uniform(0.05, 1.0);
    gamma(1) = t % 3 == 0 ? rng.uniform(0.05, 1.0) : 50.0;
    const GEvaluation g = evaluate_g(ch, gamma, pa);
    const RealVector grad = g.gradient();
    const double h = 1e-4 * (1.0 + gamma.minCoeff());
    const RealVector fd = finite_diff_grad([&](const RealVector& x) { return eval_g(ch, x, pa); }, gamma, h);
    for (Eigen::Index i = 0; i < 2; ++i) {
      (g.mu(i) > 0.0 ? active : inactive) += 1;
      worst = std::max(worst, std::abs(grad(i) - fd(i)) / std::max(0.02 * std::abs(fd(i)), 1e-4));
    }
  }
  return {worst <= 1.0 && active > 0 && inactive > 0,
          "max error / max(2% |fd|, 1e-4) = " + num(worst) + ", active " + std::to_string(active) + ", inactive " +
              std::to_string(inactive)};
}

Outcome concavity() {
  ExperimentConfig cfg;
  cfg.m = 4;
  cfg.n = 4;
  cfg.k = 2;
  cfg.seed = 33;
  Rng rng(3);
  double worst = -std::numeric_limits<double>::infinity();
  double worst_log = worst;
  for (int inst = 0; inst < 10; ++inst) {
    const SecrecyProblem p = single_antenna_problem(gen_channels(cfg, inst), 1.0, db_to_linear(5.0));
    const CrChannels ch = cr_channels(p);
    const GEvaluation top = evaluate_g(ch, RealVector::Constant(2, std::numeric_limits<double>::infinity()), kTight);
    RealVector bar(2);
    for (int i = 0; i < 2; ++i) bar(i) = received_power(ch.pu_channels[static_cast<std::size_t>(i)], top.solution.covariance);
    for (int q = 0; q < 100; ++q) {
      RealVector a(2);
      RealVector b(2);
      for (int i = 0; i < 2; ++i) {
        a(i) = rng.uniform(0.0, bar(i));
        b(i) = rng.uniform(0.0, bar(i));
      }
      const GEvaluation ga = evaluate_g(ch, a, kTight);
      const GEvaluation gb = evaluate_g(ch, b, kTight);
      const GEvaluation gm = evaluate_g(ch, 0.5 * (a + b), kTight);
      worst = std::max(worst, 0.5 * (ga.value() + gb.value()) - gm.value());
      worst_log = std::max(worst_log, 0.5 * (ga.log_g + gb.log_g) - gm.log_g);
    }
  }
  return {worst <= 1e-6, "M=N=4, K=2, P=5 dB: max midpoint violation " + num(worst) + " (det scale), " +
                             num(worst_log) + " (log scale)"};
}

Outcome secrecy_oracle() {
  Rng rng(4);
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool settled = true;
  for (int t = 0; t < 50; ++t) {
    const SecrecyProblem p = SecrecyProblem::single_antenna(rng.matrix(2, 2), {rng.matrix(2, 1), rng.matrix(2, 1)},
                                                            {1.0, 1.0}, 5.0);
    const SecrecySolution s = algorithm1(p, 1e-3);
    OracleConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(t) + 1;
    worst = std::max(worst, std::abs(brute_force_secrecy(p, cfg) - s.secrecy_rate));
    settled = settled && s.status != SecrecyStatus::Indeterminate;
  }
  double worst_scalar = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int k = 1 + t % 3;
    const cplx hs(rng.uniform(0.2, 2.0), rng.uniform(-1.0, 1.0));
    std::vector<ComplexVector> eav;
    std::vector<double> noise;
    double worst_ratio = 0.0;  // largest |h_i|^2 / sigma_i^2
    for (int i = 0; i < k; ++i) {
      eav.push_back(ComplexVector::Constant(1, cplx(rng.uniform(0.1, 2.0), rng.uniform(-1.0, 1.0))));
      noise.push_back(rng.uniform(0.5, 2.0));
      worst_ratio = std::max(worst_ratio, std::norm(eav.back()(0)) / noise.back());
    }
    const double power = rng.uniform(0.5, 20.0);
    const double a = std::norm(hs);
    // Each ratio (1 + a s) / (1 + c s) is monotone, so the best s is P or 0.
    const double exact = a > worst_ratio ? std::log((1.0 + a * power) / (1.0 + worst_ratio * power)) : 0.0;
    const SecrecyProblem p = SecrecyProblem::single_antenna(ComplexMatrix::Constant(1, 1, hs), eav, noise, power);
    worst_scalar = std::max(worst_scalar, std::abs(algorithm1(p, 1e-7).secrecy_rate - exact));
  }
  const double secs = seconds_since(t0);
  return {worst <= 5e-3 && worst_scalar <= 1e-6 && settled && secs < 300.0,
          "N=M=2, K=2: max |oracle - alg1| = " + num(worst) + "; scalar closed form max error " + num(worst_scalar) +
              "; " + num(secs) + " s"};
}

Outcome cross_algorithm() {
  ExperimentConfig cfg;
  cfg.k = 1;
  cfg.seed = 55;
  double worst12 = 0.0;
  double worst_miso = 0.0;
  for (int t = 0; t < 50; ++t) {
    const double p_db = t % 11;
    const SecrecyProblem p = single_antenna_problem(gen_channels(cfg, t), 1.0, db_to_linear(p_db));
    worst12 = std::max(worst12, std::abs(algorithm1(p, 1e-3).secrecy_rate - algorithm2(p, 1e-3).secrecy_rate));
  }
  ExperimentConfig miso = cfg;
  miso.m = 1;
  for (int t = 0; t < 50; ++t) {
    const SecrecyProblem p = single_antenna_problem(gen_channels(miso, t), 1.0, db_to_linear(t % 11));
    worst_miso =
        std::max(worst_miso, std::abs(miso_solve(p, 1e-3).solution.secrecy_rate - algorithm2(p, 1e-3).secrecy_rate));
  }
  return {worst12 <= 2e-3 && worst_miso <= 2e-3,
          "max |alg1 - alg2| = " + num(worst12) + " (M=N=4, K=1); max |miso - alg2| = " + num(worst_miso) + " (M=1)"};
}

Outcome psvd_dominance() {
  const auto t0 = Clock::now();
  double worst = -std::numeric_limits<double>::infinity();
  int failures = 0;
  for (int k : {1, 2}) {
    ExperimentConfig cfg;
    cfg.k = k;
    cfg.trials = 100;
    cfg.seed = 66;
    const SweepResult r = sweep(cfg);
    for (const auto& rec : r.records) {
      double alg1 = 0.0;
      double psvd = 0.0;
      for (const auto& m : rec.methods) {
        if (m.method == "alg1") alg1 = m.rate;
        if (m.method == "psvd") psvd = m.rate;
        if (m.method == "alg1" && m.failed) ++failures;
      }
      worst = std::max(worst, psvd - alg1);
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && failures == 0 && secs < 1800.0,
          "max (psvd - alg1) over 2200 trials = " + num(worst) + ", failed solves " + std::to_string(failures) + ", " +
              num(secs) + " s"};
}

Outcome scan_verdicts() {
  int ok = 0;
  double worst = 0.0;
  for (int k : {1, 2}) {
    for (int seed = 1; seed <= 10; ++seed) {
      ExperimentConfig cfg;
      cfg.k = k;
      cfg.seed = static_cast<std::uint64_t>(seed);
      const ScanResult s = scan_surface(cfg, 5.0, 0, k == 1 ? 200 : 50);
      ok += s.verdict;
      worst = std::max(worst, s.worst_violation);
    }
  }
  return {ok == 20, std::to_string(ok) + "/20 verdicts hold (K=1 unimodal, K=2 row-contiguous), worst violation " +
                        num(worst)};
}

Outcome bounds_ordering() {
  ExperimentConfig cfg;
  cfg.k = 1;
  cfg.ne = 2;
  cfg.mode = "bounds";
  cfg.trials = 100;
  cfg.seed = 88;
  const SweepResult r = sweep(cfg);
  const double eps_total = 2.0 * cfg.eps_rate;
  double worst_low = -std::numeric_limits<double>::infinity();
  double worst_up = -std::numeric_limits<double>::infinity();
  int failures = 0;
  for (const auto& rec : r.records) {
    double v[3] = {0, 0, 0};
    for (const auto& m : rec.methods) {
      if (m.method == "lower") v[0] = m.rate;
      if (m.method == "achievable") v[1] = m.rate;
      if (m.method == "upper") v[2] = m.rate;
      failures += m.failed;
    }
    worst_low = std::max(worst_low, v[0] - v[1]);
    worst_up = std::max(worst_up, v[1] - v[2]);
  }
  // N_e = 1: the lower bound collapses to the single-antenna capacity.
  ExperimentConfig one = cfg;
  one.ne = 1;
  double tight = 0.0;
  for (int t = 0; t < 50; ++t) {
    const ChannelDraw d = gen_channels(one, t);
    const double power = db_to_linear(t % 11);
    const double lower = lower_bound_multiantenna(multi_antenna_problem(d, 1.0, power), 1e-3).rate;
    tight = std::max(tight, std::abs(lower - algorithm1(single_antenna_problem(d, 1.0, power), 1e-3).secrecy_rate));
  }
  return {worst_low <= 1e-6 && worst_up <= eps_total && tight <= 2e-3 && failures == 0,
          "N_e=2 (1100 points): max(lower - achievable) = " + num(worst_low) + ", max(achievable - upper) = " +
              num(worst_up) + "; N_e=1: max |lower - alg1| = " + num(tight)};
}

Outcome miso_rank_one() {
  ExperimentConfig cfg;
  cfg.m = 1;
  cfg.seed = 99;
  double worst = 0.0;
  int unsettled = 0;
  for (int t = 0; t < 50; ++t) {
    cfg.k = 1 + t % 3;
    const MisoSolution m = miso_solve(single_antenna_problem(gen_channels(cfg, t), 1.0, db_to_linear(t % 11)), 1e-3);
    if (m.solution.status != SecrecyStatus::Converged) {
      ++unsettled;
      continue;
    }
    worst = std::max(worst, m.eigen_ratio);
  }
  return {worst <= 1e-4 && unsettled == 0,
          "max lambda2/lambda1 = " + num(worst) + " over 50 instances, unconverged " + std::to_string(unsettled)};
}

Outcome round_trip() {
  ExperimentConfig cfg;
  cfg.seed = 1010;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    cfg.k = 1 + t % 3;
    const SecrecyProblem p = single_antenna_problem(gen_channels(cfg, t), 1.0, db_to_linear(t % 11));
    const SecrecySolution s = algorithm1(p, 1e-3);
    const CrSolution again = solve_pa(CrProblem{cr_channels(p), s.gamma_star}, kTight);
    worst = std::max(worst, std::abs(again.capacity - logdet_capacity(p.hs, s.covariance)));
  }
  return {worst <= 1e-6, "max |C_pa(h^H S* h) - log det(I + Hs^H S* Hs)| = " + num(worst)};
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome determinism() {
  int identical = 0;
  int runs = 0;
  std::vector<ExperimentConfig> cfgs(3);
  cfgs[0].k = 2;
  cfgs[1].mode = "pa";
  cfgs[2].mode = "bounds";
  cfgs[2].k = 1;
  cfgs[2].ne = 2;
  for (auto& cfg : cfgs) {
    cfg.trials = 3;
    cfg.p_db_grid = {0.0, 5.0, 10.0};
    std::ostringstream a;
    std::ostringstream b;
    std::ostringstream c;
    write_sweep_csv(a, sweep(cfg, true).rows);
    write_sweep_csv(b, sweep(cfg, true).rows);
    write_sweep_csv(c, sweep(cfg, false).rows);
    identical += a.str() == b.str() && a.str() == c.str();
    ++runs;
  }
#ifdef SECRECY_CLI
  // Two runs of the command-line sweep.
  const std::string base = std::string(SECRECY_CLI) + " sweep --k 2 --trials 3 --p-db-grid 0:10:5 --seed 7 --out ";
  const std::string dir = std::filesystem::temp_directory_path().string();
  const std::string f1 = dir + "/acceptance_sweep_1.csv";
  const std::string f2 = dir + "/acceptance_sweep_2.csv";
  const bool ran = std::system((base + f1 + " 2>/dev/null").c_str()) == 0 &&
                   std::system((base + f2 + " 2>/dev/null").c_str()) == 0;
  const std::string b1 = file_bytes(f1);
  identical += ran && !b1.empty() && b1 == file_bytes(f2);
  ++runs;
#endif
  return {identical == runs, std::to_string(identical) + "/" + std::to_string(runs) +
                                 " sweep configurations byte-identical across repeated and serial runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"spectrum-sharing solver matches projected-gradient oracle", pa_oracle},
      {"grad_g matches finite differences", gradient},
      {"midpoint concavity of g", concavity},
      {"algorithm1 matches brute-force secrecy oracle and scalar closed form", secrecy_oracle},
      {"algorithm1/algorithm2 and miso/algorithm2 agreement", cross_algorithm},
      {"capacity dominates the P-SVD rate", psvd_dominance},
      {"surface scan verdicts", scan_verdicts},
      {"lower <= achievable <= upper, tight lower bound for N_e = 1", bounds_ordering},
      {"MISO covariance is rank one", miso_rank_one},
      {"IT round trip reproduces the capacity", round_trip},
      {"sweep output is deterministic", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("CRITERION %zu %s: %s | %s [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
