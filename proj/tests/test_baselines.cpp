#include "doctest.h"
#include "test_util.hpp"

#include "secrecy/algorithms.hpp"
#include "secrecy/baselines.hpp"

#include <cmath>

using namespace secrecy;
using testutil::Gen;

namespace {

SecrecyProblem random_problem(Gen& gen, Eigen::Index n, Eigen::Index m, int k, double power) {
  std::vector<ComplexVector> eav;
  for (int i = 0; i < k; ++i) eav.push_back(gen.vector(n));
  return SecrecyProblem::single_antenna(gen.matrix(n, m), eav, std::vector<double>(static_cast<std::size_t>(k), 1.0),
                                        power);
}

}  // namespace

TEST_CASE("budget_waterfill spends the budget") {
  RealVector g(3);
  g << 3.0, 1.0, 0.1;
  const RealVector p = budget_waterfill(g, 2.0);
  CHECK(p.sum() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK((p.array() >= 0.0).all());
  // Equal water level on the used channels.
  CHECK(p(0) + 1.0 / g(0) == doctest::Approx(p(1) + 1.0 / g(1)).epsilon(1e-9));
  CHECK(p(2) == 0.0);
}

TEST_CASE("p_svd_rate") {
  SUBCASE("orthogonal eavesdropper: full water-filling") {
    ComplexMatrix hs = ComplexMatrix::Zero(2, 1);
    hs(0, 0) = 2.0;
    const SecrecyProblem p = SecrecyProblem::single_antenna(hs, {ComplexMatrix::Identity(2, 2).col(1)}, {1.0}, 3.0);
    CHECK(p_svd_rate(p).rate == doctest::Approx(std::log(13.0)).epsilon(1e-9));
  }
  SUBCASE("eavesdroppers span the space") {
    Gen gen(51);
    const PsvdResult r = p_svd_rate(random_problem(gen, 2, 2, 2, 3.0));
    CHECK(r.rate == 0.0);
    CHECK(r.covariance.norm() == 0.0);
  }
  SUBCASE("exact nulling and dominance by the capacity") {
    Gen gen(52);
    for (int t = 0; t < 10; ++t) {
      const SecrecyProblem p = random_problem(gen, 4, 4, 2, 3.0);
      const PsvdResult r = p_svd_rate(p);
      for (const auto& h : p.eavesdroppers) CHECK(received_power(h, r.covariance) <= 1e-10);
      CHECK(r.covariance.trace().real() == doctest::Approx(3.0).epsilon(1e-9));
      CHECK(r.rate <= algorithm1(p, 1e-3).secrecy_rate + 1e-6);
    }
  }
}

TEST_CASE("brute_force_secrecy") {
  SUBCASE("scalar instances against a dense grid over s") {
    Gen gen(53);
    for (int t = 0; t < 5; ++t) {
      const SecrecyProblem p = random_problem(gen, 1, 1, 2, gen.uniform(1.0, 5.0));
      double grid = 0.0;
      for (double s = 0.0; s <= p.power; s += 1e-4) {
        grid = std::max(grid, secrecy_rate(ComplexMatrix::Constant(1, 1, s), p));
      }
      CHECK(std::abs(brute_force_secrecy(p) - grid) <= 1e-4);
    }
  }
  SUBCASE("zero start without iterations") {
    Gen gen(54);
    OracleConfig cfg;
    cfg.restarts = 1;
    cfg.max_iters = 0;
    CHECK(brute_force_secrecy(random_problem(gen, 2, 2, 2, 5.0), cfg) == 0.0);
  }
  SUBCASE("agrees with algorithm1 on small instances") {
    Gen gen(55);
    for (int t = 0; t < 5; ++t) {
      const SecrecyProblem p = random_problem(gen, 2, 2, 2, 5.0);
      CHECK(std::abs(brute_force_secrecy(p) - algorithm1(p, 1e-3).secrecy_rate) <= 5e-3);
    }
  }
  SUBCASE("seed determinism") {
    Gen gen(56);
    const SecrecyProblem p = random_problem(gen, 3, 2, 2, 5.0);
    OracleConfig cfg;
    cfg.seed = 9;
    CHECK(brute_force_secrecy(p, cfg) == brute_force_secrecy(p, cfg));
    cfg.step_rule = "diminishing";
    CHECK(brute_force_secrecy(p, cfg) == brute_force_secrecy(p, cfg));
  }
  SUBCASE("config validation") {
    OracleConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
}

TEST_CASE("brute_force_pa") {
  SUBCASE("scalar closed form") {
    CrProblem p;
    p.channels.hs = ComplexMatrix::Constant(1, 1, 1.0);
    p.channels.pu_channels = {ComplexMatrix::Constant(1, 1, 1.0)};
    p.channels.power = 10.0;
    p.it_limits = RealVector::Constant(1, 1.0);
    CHECK(brute_force_pa(p) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  }
  SUBCASE("no limits: water-filling") {
    CrProblem p;
    p.channels.hs = ComplexMatrix::Identity(2, 2);
    p.channels.power = 2.0;
    p.it_limits = RealVector(0);
    CHECK(brute_force_pa(p) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-6));
  }
  SUBCASE("agrees with solve_pa") {
    Gen gen(57);
    for (int t = 0; t < 5; ++t) {
      CrProblem p;
      p.channels.hs = gen.matrix(2, 2);
      p.channels.pu_channels = {gen.matrix(2, 1)};
      p.channels.power = 5.0;
      p.it_limits = RealVector::Constant(1, gen.uniform(0.0, 1.0));
      CHECK(std::abs(brute_force_pa(p) - solve_pa(p).capacity) <= 1e-3);
    }
  }
}
