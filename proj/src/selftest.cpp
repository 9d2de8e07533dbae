#include "secrecy/selftest.hpp"

#include "secrecy/baselines.hpp"
#include "secrecy/bounds.hpp"
#include "secrecy/scan.hpp"
#include "secrecy/sweep.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

namespace secrecy {

namespace {

class Draws {
 public:
  Draws(std::uint64_t seed, std::uint32_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
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
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  SecrecyProblem single(int n, int m, int k, double power) {
    ComplexMatrix hs = matrix(n, m);
    std::vector<ComplexVector> eav;
    for (int i = 0; i < k; ++i) eav.push_back(matrix(n, 1));
    return SecrecyProblem::single_antenna(hs, eav, std::vector<double>(static_cast<std::size_t>(k), 1.0), power);
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, std::sqrt(0.5)};
};

struct Check {
  std::vector<PropertyReport>& out;
  void operator()(const std::string& name, double threshold, const std::function<double()>& worst) {
    PropertyReport r;
    r.name = name;
    r.threshold = threshold;
    try {
      r.worst = worst();
      r.pass = r.worst <= threshold;
    } catch (const std::exception&) {
      r.worst = std::numeric_limits<double>::infinity();
      r.pass = false;
    }
    out.push_back(r);
  }
};

}  // namespace

std::vector<PropertyReport> selftest(const SelftestOptions& options) {
  std::vector<PropertyReport> out;
  Check check{out};
  const std::uint64_t seed = options.seed;
  const double inf = std::numeric_limits<double>::infinity();

  check("eigh_residuals", 1e-9, [&] {
    Draws d(seed, 1);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const Eigen::Index n = d.integer(1, 8);
      const ComplexMatrix a = hermitian_part(d.matrix(n, n));
      const EigDecomposition e = eigh(a);
      const ComplexMatrix rec = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
      worst = std::max(worst, (a - rec).norm() / (1.0 + a.norm()));
      worst = std::max(worst, (e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(n, n)).norm());
      for (Eigen::Index k = 1; k < n; ++k) worst = std::max(worst, e.values(k) - e.values(k - 1));
    }
    return worst;
  });

  check("logdet_monotone", 1e-12, [&] {
    Draws d(seed, 2);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Eigen::Index n = d.integer(1, 4);
      const ComplexMatrix h = d.matrix(n, d.integer(1, 4));
      const ComplexMatrix b = d.matrix(n, n);
      const ComplexMatrix s = b * b.adjoint();
      const ComplexMatrix v = d.matrix(n, 1);
      worst = std::max(worst, logdet_capacity(h, s) - logdet_capacity(h, s + v * v.adjoint()));
    }
    return worst;
  });

  check("waterfill_optimal", 1e-9, [&] {
    Draws d(seed, 3);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      RealVector g(4);
      for (int k = 0; k < 4; ++k) g(k) = d.uniform(0.0, 5.0);
      const RealVector p = penalized_waterfill(g);
      auto obj = [&](const RealVector& x) { return (1.0 + (g.array() * x.array())).log().sum() - x.sum(); };
      for (int k = 0; k < 10; ++k) {
        RealVector q = p;
        for (int j = 0; j < 4; ++j) q(j) = std::max(0.0, q(j) + d.uniform(-1e-2, 1e-2));
        worst = std::max(worst, obj(q) - obj(p));
      }
    }
    return worst;
  });

  check("pa_certificates", 1e-4, [&] {
    Draws d(seed, 4);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      CrProblem p;
      p.channels.hs = d.matrix(4, 4);
      p.channels.power = d.uniform(1.0, 10.0);
      p.it_limits.resize(2);
      for (int i = 0; i < 2; ++i) {
        p.channels.pu_channels.push_back(d.matrix(4, 1));
        p.it_limits(i) = d.uniform(0.0, 2.0);
      }
      const CrSolution s = solve_pa(p, CrOptions{1e-9, 500, 40, std::nullopt});
      const double pw = p.channels.power;
      worst = std::max(worst, 100.0 * s.duality_gap());  // gap <= 1e-6
      worst = std::max(worst, (s.covariance.trace().real() - pw) / pw * 100.0);
      worst = std::max(worst, s.dual.lambda * (pw - s.covariance.trace().real()) / (1.0 + pw));
      for (int i = 0; i < 2; ++i) {
        const double leak = received_power(p.channels.pu_channels[static_cast<std::size_t>(i)], s.covariance);
        const double lim = p.it_limits(i);
        worst = std::max(worst, (leak - lim) / (1.0 + lim) * 100.0);
        worst = std::max(worst, s.dual.mu(i) * (lim - leak) / (1.0 + lim));
      }
      worst = std::max(worst, s.kkt_residual);
    }
    return worst;
  });

  check("pa_matches_oracle", 1e-3, [&] {
    Draws d(seed, 5);
    double worst = 0.0;
    for (int t = 0; t < 4; ++t) {
      CrProblem p;
      p.channels.hs = d.matrix(2, 2);
      p.channels.power = 5.0;
      const int k = 1 + t % 2;
      p.it_limits.resize(k);
      for (int i = 0; i < k; ++i) {
        p.channels.pu_channels.push_back(d.matrix(2, 1));
        p.it_limits(i) = d.uniform(0.0, 2.0);
      }
      OracleConfig cfg;
      cfg.seed = seed;
      worst = std::max(worst, std::abs(solve_pa(p).capacity - brute_force_pa(p, cfg)));
    }
    return worst;
  });

  check("grad_g_finite_difference", 0.02, [&] {
    Draws d(seed, 6);
    double worst = 0.0;
    const CrOptions pa{1e-11, 1000, 60, std::nullopt};
    for (int t = 0; t < 10; ++t) {
      CrChannels ch;
      ch.hs = d.matrix(2, 2);
      ch.power = 5.0;
      ch.pu_channels = {d.matrix(2, 1), d.matrix(2, 1)};
      RealVector gamma(2);
      // Alternate between tight limits and a slack one.
      gamma(0) = d.uniform(0.05, 1.0);
      gamma(1) = t % 2 ? 100.0 : d.uniform(0.05, 1.0);
      RealVector grad = grad_g(ch, gamma, pa);
      if (options.corrupt_gradient) grad *= 1.1;
      const double h = 1e-4 * (1.0 + gamma.maxCoeff());
      const RealVector fd = finite_diff_grad([&](const RealVector& x) { return eval_g(ch, x, pa); }, gamma, h);
      for (Eigen::Index i = 0; i < 2; ++i) {
        worst = std::max(worst, std::abs(grad(i) - fd(i)) / std::max(std::abs(fd(i)), 5e-3));
      }
    }
    return worst;
  });

  check("log_g_midpoint_concave", 1e-6, [&] {
    Draws d(seed, 7);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      CrChannels ch;
      ch.hs = d.matrix(3, 3);
      ch.power = 3.0;
      ch.pu_channels = {d.matrix(3, 1), d.matrix(3, 1)};
      for (int q = 0; q < 20; ++q) {
        RealVector a(2);
        RealVector b(2);
        for (int i = 0; i < 2; ++i) {
          a(i) = d.uniform(0.0, 3.0);
          b(i) = d.uniform(0.0, 3.0);
        }
        const GEvaluation ga = evaluate_g(ch, a, {1e-10, 500, 40, std::nullopt});
        const GEvaluation gb = evaluate_g(ch, b, {1e-10, 500, 40, std::nullopt});
        const GEvaluation gm = evaluate_g(ch, 0.5 * (a + b), {1e-10, 500, 40, std::nullopt});
        worst = std::max(worst, 0.5 * (ga.log_g + gb.log_g) - gm.log_g_upper);
      }
    }
    return worst;
  });

  check("g_monotone", 1e-9, [&] {
    Draws d(seed, 8);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      CrChannels ch;
      ch.hs = d.matrix(3, 3);
      ch.power = 3.0;
      ch.pu_channels = {d.matrix(3, 1), d.matrix(3, 1)};
      RealVector a(2);
      for (int i = 0; i < 2; ++i) a(i) = d.uniform(0.0, 2.0);
      RealVector b = a;
      b(t % 2) += d.uniform(0.0, 1.0);
      worst = std::max(worst, evaluate_g(ch, a).log_g - evaluate_g(ch, b).log_g_upper);
    }
    return worst;
  });

  check("alg1_vs_bruteforce", 5e-3, [&] {
    Draws d(seed, 9);
    double worst = 0.0;
    for (int t = 0; t < 4; ++t) {
      const SecrecyProblem p = d.single(2, 2, 2, 5.0);
      OracleConfig cfg;
      cfg.seed = seed;
      worst = std::max(worst, brute_force_secrecy(p, cfg) - algorithm1(p, 1e-3).secrecy_rate);
    }
    return worst;
  });

  check("alg1_vs_alg2", 2e-3, [&] {
    Draws d(seed, 10);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const SecrecyProblem p = d.single(4, 4, 1, db_to_linear(d.uniform(0.0, 10.0)));
      worst = std::max(worst, std::abs(algorithm1(p, 1e-3).secrecy_rate - algorithm2(p, 1e-3).secrecy_rate));
    }
    return worst;
  });

  check("miso_rank_one", 1e-4, [&] {
    Draws d(seed, 11);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const SecrecyProblem p = d.single(4, 1, 1 + t % 2, db_to_linear(d.uniform(0.0, 10.0)));
      worst = std::max(worst, miso_solve(p, 1e-3).eigen_ratio);
    }
    return worst;
  });

  check("miso_vs_alg2", 2e-3, [&] {
    Draws d(seed, 15);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const SecrecyProblem p = d.single(4, 1, 1, db_to_linear(d.uniform(0.0, 10.0)));
      worst = std::max(worst, std::abs(miso_solve(p, 1e-3).solution.secrecy_rate - algorithm2(p, 1e-3).secrecy_rate));
    }
    return worst;
  });

  check("psvd_dominance", 1e-6, [&] {
    Draws d(seed, 12);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const SecrecyProblem p = d.single(4, 4, 1 + t % 2, db_to_linear(d.uniform(0.0, 10.0)));
      const PsvdResult ps = p_svd_rate(p);
      worst = std::max(worst, ps.rate - algorithm1(p, 1e-3).secrecy_rate);
      for (const auto& e : p.eavesdroppers) worst = std::max(worst, received_power(e, ps.covariance) * 1e-4);
    }
    return worst;
  });

  check("it_round_trip", 1e-6, [&] {
    Draws d(seed, 13);
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const SecrecyProblem p = d.single(4, 4, 2, db_to_linear(d.uniform(0.0, 10.0)));
      const SecrecySolution s = algorithm1(p, 1e-3);
      CrProblem q{cr_channels(p), s.gamma_star};
      const double again = solve_pa(q, CrOptions{1e-10, 500, 40, std::nullopt}).capacity;
      worst = std::max(worst, std::abs(again - logdet_capacity(p.hs, s.covariance)));
    }
    return worst;
  });

  check("bounds_ordering", 2e-3, [&] {
    Draws d(seed, 14);
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
      const SecrecyProblem p =
          SecrecyProblem::multi_antenna(d.matrix(4, 4), {d.matrix(4, 2)}, db_to_linear(d.uniform(0.0, 10.0)));
      const BoundsResult b = bounds(p, 1e-3);
      worst = std::max(worst, 1e3 * std::max(0.0, b.lower_bound - b.achievable_rate - 1e-6));
      worst = std::max(worst, b.achievable_rate - b.upper_bound);
    }
    return worst;
  });

  check("channel_moments", 0.02, [&] {
    ExperimentConfig cfg;
    cfg.seed = seed;
    cfg.n = 50;
    cfg.m = 50;
    cfg.k = 1;
    double worst = 0.0;
    cplx sum = 0.0;
    double sq = 0.0;
    long count = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const ChannelDraw draw = gen_channels(cfg, trial);
      sum += draw.hs.sum();
      sq += draw.hs.squaredNorm();
      count += draw.hs.size();
    }
    worst = std::max(worst, std::abs(sum) / static_cast<double>(count));
    worst = std::max(worst, std::abs(sq / static_cast<double>(count) - 1.0));
    const ChannelDraw a = gen_channels(cfg, 3);
    const ChannelDraw b = gen_channels(cfg, 3);
    if (a.hs != b.hs) worst = inf;
    return worst;
  });

  check("sweep_deterministic", 0.0, [&] {
    ExperimentConfig cfg;
    cfg.seed = seed;
    cfg.k = 1;
    cfg.trials = 2;
    cfg.p_db_grid = {0.0, 5.0};
    std::ostringstream a;
    std::ostringstream b;
    write_sweep_csv(a, sweep(cfg, true).rows);
    write_sweep_csv(b, sweep(cfg, false).rows);
    return a.str() == b.str() ? 0.0 : 1.0;
  });

  check("scan_verdicts", 0.0, [&] {
    ExperimentConfig cfg;
    cfg.seed = seed;
    double bad = 0.0;
    for (int k : {1, 2}) {
      cfg.k = k;
      const ScanResult s = scan_surface(cfg, 5.0, 0, 20);
      if (!s.verdict) bad = std::max(bad, s.worst_violation);
      if (s.log_f[0] != evaluate_g(cr_channels(single_antenna_problem(gen_channels(cfg, 0), cfg.sigma2, db_to_linear(5.0))),
                                   RealVector::Zero(k), {1e-9, 500, 40, std::nullopt})
                            .log_g) {
        bad = std::max(bad, 1.0);
      }
    }
    return bad;
  });

  return out;
}

std::string format_report(const std::vector<PropertyReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << " worst=" << format_number(r.worst)
        << " threshold=" << format_number(r.threshold) << '\n';
  }
  return out.str();
}

}  // namespace secrecy
