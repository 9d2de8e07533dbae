#include "doctest.h"
#include "test_util.hpp"

#include "secrecy/algorithms.hpp"
#include "secrecy/baselines.hpp"
#include "secrecy/bounds.hpp"
#include "secrecy/experiment.hpp"

#include <cmath>

using namespace secrecy;
using testutil::Gen;

namespace {

ComplexMatrix scalar(double re) { return ComplexMatrix::Constant(1, 1, cplx(re, 0.0)); }

// |hs|^2 = 2, |h|^2 = 1, sigma^2 = 1, P = 10.
SecrecyProblem scalar_problem() {
  return SecrecyProblem::single_antenna(scalar(std::sqrt(2.0)), {ComplexVector::Ones(1)}, {1.0}, 10.0);
}

SecrecyProblem random_problem(Gen& gen, Eigen::Index n, Eigen::Index m, int k, double power) {
  std::vector<ComplexVector> eav;
  std::vector<double> noise;
  for (int i = 0; i < k; ++i) {
    eav.push_back(gen.vector(n));
    noise.push_back(1.0);
  }
  return SecrecyProblem::single_antenna(gen.matrix(n, m), eav, noise, power);
}

}  // namespace

TEST_CASE("secrecy_rate small cases") {
  const SecrecyProblem p = scalar_problem();
  CHECK(secrecy_rate(ComplexMatrix::Zero(1, 1), p) == 0.0);
  SecrecyProblem q = SecrecyProblem::single_antenna(scalar(std::sqrt(2.0)), {ComplexVector::Ones(1)}, {1.0}, 1.0);
  CHECK(secrecy_rate(scalar(1.0), q) == doctest::Approx(std::log(3.0) - std::log(2.0)));
}

TEST_CASE("scalar secrecy capacity") {
  const SecrecyProblem p = scalar_problem();
  const double exact = std::log(21.0 / 11.0);
  const double eps = 1e-3;
  const SecrecySolution a1 = algorithm1(p, eps);
  CHECK(a1.status == SecrecyStatus::Converged);
  CHECK(std::abs(a1.secrecy_rate - exact) <= eps);
  CHECK(std::abs(algorithm2(p, eps).secrecy_rate - exact) <= 2.0 * eps);
  CHECK(std::abs(miso_solve(p, eps).solution.secrecy_rate - exact) <= 2.0 * eps);
}

TEST_CASE("decoupled eavesdropper leaves water-filling intact") {
  // Hs lives on the first two axes, the eavesdropper on the third.
  Gen gen(31);
  ComplexMatrix hs = ComplexMatrix::Zero(3, 2);
  hs.topRows(2) = gen.matrix(2, 2);
  const SecrecyProblem p = SecrecyProblem::single_antenna(hs, {ComplexMatrix::Identity(3, 3).col(2)}, {1.0}, 4.0);
  const double unconstrained = p_svd_rate(SecrecyProblem::single_antenna(hs, {ComplexMatrix::Identity(3, 3).col(2)}, {1.0}, 4.0)).rate;
  const Eigen::JacobiSVD<ComplexMatrix> svd(hs);
  const RealVector gains = svd.singularValues().array().square();
  const double wf = (1.0 + gains.array() * budget_waterfill(gains, 4.0).array()).log().sum();
  CHECK(unconstrained == doctest::Approx(wf).epsilon(1e-9));
  CHECK(std::abs(algorithm1(p, 1e-4).secrecy_rate - wf) <= 1e-4);
  CHECK(std::abs(algorithm2(p, 1e-4).secrecy_rate - wf) <= 2e-4);
}

TEST_CASE("algorithm1 reports a consistent solution") {
  Gen gen(32);
  for (int t = 0; t < 5; ++t) {
    const SecrecyProblem p = random_problem(gen, 4, 4, 2, 3.0);
    const double eps = 1e-3;
    const SecrecySolution s = algorithm1(p, eps);
    CHECK(s.status == SecrecyStatus::Converged);
    CHECK(std::abs(secrecy_rate(s.covariance, p) - s.secrecy_rate) < 1e-12);
    CHECK(std::abs(std::log(s.t_star) - s.secrecy_rate) <= eps);
    CHECK(is_psd(s.covariance));
    CHECK(s.covariance.trace().real() <= p.power * (1.0 + 1e-9));
    REQUIRE(s.gamma_star.size() == 2);
    CHECK(!s.binding.empty());
    // Re-solving with the received powers as limits reproduces the capacity.
    const CrSolution again = solve_pa(CrProblem{cr_channels(p), s.gamma_star}, CrOptions{1e-10, 500, 40, std::nullopt});
    CHECK(std::abs(again.capacity - logdet_capacity(p.hs, s.covariance)) <= 1e-6);
  }
}

TEST_CASE("feasibility_check at the extremes") {
  Gen gen(33);
  const SecrecyProblem p = random_problem(gen, 2, 2, 2, 5.0);
  CHECK(feasibility_check(1.0, p).verdict == Verdict::Feasible);
  const double g_inf = eval_g(cr_channels(p), RealVector::Constant(2, std::numeric_limits<double>::infinity()));
  const FeasibilityOutcome above = feasibility_check(g_inf * 1.01, p);
  CHECK(above.verdict == Verdict::Infeasible);
  CHECK(above.certificate != CertificateKind::None);
}

TEST_CASE("feasibility_check agrees with a grid search") {
  Gen gen(34);
  const SecrecyProblem p = random_problem(gen, 2, 2, 2, 5.0);
  const CrChannels ch = cr_channels(p);
  const CrOptions pa{1e-9, 500, 40, std::nullopt};
  // Limits beyond P |h_i|^2 never bind.
  const double top0 = p.power * ch.pu_channels[0].squaredNorm();
  const double top1 = p.power * ch.pu_channels[1].squaredNorm();
  double grid_best = 0.0;
  const int steps = 60;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; b <= steps; ++b) {
      RealVector gamma(2);
      gamma << top0 * a / steps, top1 * b / steps;
      const double log_g = std::log(eval_g(ch, gamma, pa));
      grid_best = std::max(grid_best, log_g - std::max(std::log1p(gamma(0)), std::log1p(gamma(1))));
    }
  }
  const SecrecySolution s = algorithm1(p, 1e-4);
  CHECK(s.secrecy_rate >= grid_best - 1e-4);
  if (grid_best > 0.05) CHECK(feasibility_check(std::exp(0.9 * grid_best), p).verdict == Verdict::Feasible);
  CHECK(feasibility_check(std::exp(s.secrecy_rate + 0.05), p).verdict == Verdict::Infeasible);
}

TEST_CASE("algorithm1 and algorithm2 agree for one eavesdropper") {
  ExperimentConfig cfg;
  cfg.k = 1;
  cfg.seed = 35;
  for (int t = 0; t < 5; ++t) {
    const SecrecyProblem p = single_antenna_problem(gen_channels(cfg, t), 1.0, db_to_linear(5.0));
    CHECK(std::abs(algorithm1(p, 1e-3).secrecy_rate - algorithm2(p, 1e-3).secrecy_rate) <= 2e-3);
  }
}

TEST_CASE("algorithm2 on an eavesdropper-free direction") {
  ComplexMatrix hs = ComplexMatrix::Zero(2, 1);
  hs(0, 0) = 1.5;
  const SecrecyProblem p = SecrecyProblem::single_antenna(hs, {ComplexMatrix::Identity(2, 2).col(1)}, {1.0}, 3.0);
  CHECK(algorithm2(p, 1e-4).secrecy_rate == doctest::Approx(std::log1p(2.25 * 3.0)).epsilon(1e-6));
}

TEST_CASE("algorithm2 requires a single eavesdropper") {
  Gen gen(36);
  CHECK_THROWS_AS(algorithm2(random_problem(gen, 2, 2, 2, 1.0)), std::invalid_argument);
}

TEST_CASE("miso solver") {
  SUBCASE("identical channels give zero rate") {
    const ComplexVector h = Gen(37).vector(3);
    const SecrecyProblem p = SecrecyProblem::single_antenna(h, {h}, {1.0}, 5.0);
    CHECK(std::abs(miso_solve(p, 1e-3).solution.secrecy_rate) <= 1e-9);
  }
  SUBCASE("matches algorithm2 for one eavesdropper") {
    Gen gen(38);
    for (int t = 0; t < 5; ++t) {
      const SecrecyProblem p = random_problem(gen, 4, 1, 1, 3.0);
      CHECK(std::abs(miso_solve(p, 1e-3).solution.secrecy_rate - algorithm2(p, 1e-3).secrecy_rate) <= 2e-3);
    }
  }
  SUBCASE("rank one covariance") {
    Gen gen(39);
    for (int t = 0; t < 5; ++t) {
      const MisoSolution m = miso_solve(random_problem(gen, 4, 1, 2, 3.0), 1e-3);
      CHECK(m.solution.status == SecrecyStatus::Converged);
      CHECK(m.eigen_ratio <= 1e-4);
    }
  }
  SUBCASE("rejects several receive antennas") {
    Gen gen(40);
    CHECK_THROWS_AS(miso_solve(random_problem(gen, 2, 2, 1, 1.0)), std::invalid_argument);
  }
}

TEST_CASE("multi-antenna bounds") {
  ExperimentConfig cfg;
  cfg.k = 1;
  cfg.seed = 41;
  SUBCASE("one antenna per eavesdropper collapses to algorithm1") {
    cfg.ne = 1;
    for (int t = 0; t < 3; ++t) {
      const ChannelDraw d = gen_channels(cfg, t);
      const double a1 = algorithm1(single_antenna_problem(d, 1.0, 3.0), 1e-3).secrecy_rate;
      const BoundsResult b = bounds(multi_antenna_problem(d, 1.0, 3.0), 1e-3);
      CHECK(std::abs(b.lower_bound - a1) <= 2e-3);
      CHECK(std::abs(b.upper_bound - a1) <= 2e-3);
      CHECK(b.achievable_rate >= b.lower_bound - 1e-9);
    }
  }
  SUBCASE("ordering with two antennas per eavesdropper") {
    cfg.ne = 2;
    for (int t = 0; t < 3; ++t) {
      const BoundsResult b = bounds(multi_antenna_problem(gen_channels(cfg, t), 1.0, 3.0), 1e-3);
      CHECK(b.lower_bound <= b.achievable_rate + 1e-9);
      CHECK(b.achievable_rate <= b.upper_bound + 2e-3);
    }
  }
  SUBCASE("a zero column adds nothing to the upper bound") {
    Gen gen(42);
    const ComplexMatrix hs = gen.matrix(3, 2);
    const ComplexVector h = gen.vector(3);
    ComplexMatrix with_zero = ComplexMatrix::Zero(3, 2);
    with_zero.col(0) = h;
    const double single = upper_bound_multiantenna(SecrecyProblem::multi_antenna(hs, {ComplexMatrix(h)}, 2.0), 1e-4).secrecy_rate;
    const double padded = upper_bound_multiantenna(SecrecyProblem::multi_antenna(hs, {with_zero}, 2.0), 1e-4).secrecy_rate;
    CHECK(std::abs(single - padded) <= 2e-4);
    CHECK(split_antennas(SecrecyProblem::multi_antenna(hs, {with_zero}, 2.0)).eavesdropper_count() == 2);
  }
}
