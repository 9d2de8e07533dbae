#include "doctest.h"
#include "test_util.hpp"

#include "secrecy/channel_io.hpp"
#include "secrecy/scan.hpp"
#include "secrecy/selftest.hpp"
#include "secrecy/sweep.hpp"

#include "json.hpp"

#include <cmath>
#include <sstream>

using namespace secrecy;

TEST_CASE("db_to_linear") {
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(-3.0) == doctest::Approx(0.501187233627));
}

TEST_CASE("gen_channels is deterministic and seed dependent") {
  ExperimentConfig cfg;
  cfg.seed = 5;
  const ChannelDraw a = gen_channels(cfg, 3);
  const ChannelDraw b = gen_channels(cfg, 3);
  CHECK(a.hs == b.hs);
  REQUIRE(a.eavesdroppers.size() == 2);
  CHECK(a.eavesdroppers[1] == b.eavesdroppers[1]);
  CHECK(channel_digest(a) == channel_digest(b));
  CHECK(channel_digest(a) != channel_digest(gen_channels(cfg, 4)));
  cfg.seed = 6;
  CHECK(gen_channels(cfg, 3).hs != a.hs);
  CHECK(a.hs.rows() == 4);
  CHECK(a.hs.cols() == 4);
}

TEST_CASE("gen_channels moments") {
  ExperimentConfig cfg;
  cfg.m = 10;
  cfg.n = 10;
  cfg.k = 1;
  cfg.seed = 77;
  cplx sum = 0.0;
  double sq = 0.0;
  double re_sq = 0.0;
  long count = 0;
  for (int t = 0; t < 1000; ++t) {
    const ComplexMatrix h = gen_channels(cfg, t).hs;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      sum += h(i);
      sq += std::norm(h(i));
      re_sq += h(i).real() * h(i).real();
      ++count;
    }
  }
  REQUIRE(count == 100000);
  const cplx mean = sum / static_cast<double>(count);
  const double var = sq / count - std::norm(mean);
  CHECK(std::abs(mean) <= 0.02);
  CHECK(var >= 0.98);
  CHECK(var <= 1.02);
  CHECK(re_sq / count == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("channel file round trip") {
  testutil::Gen gen(61);
  ChannelFile f;
  f.hs = gen.matrix(3, 2);
  f.eavesdroppers = {gen.matrix(3, 1), gen.matrix(3, 1)};
  f.sigma2 = {RealVector::Constant(1, 1.5), RealVector::Constant(1, 0.5)};
  f.power = 4.0;
  RealVector gamma(2);
  gamma << 0.25, std::numeric_limits<double>::infinity();
  f.gamma = gamma;
  const ChannelFile g = parse_channels(format_channels(f));
  CHECK((g.hs - f.hs).norm() == 0.0);
  REQUIRE(g.eavesdroppers.size() == 2);
  CHECK((g.eavesdroppers[1] - f.eavesdroppers[1]).norm() == 0.0);
  CHECK(g.sigma2[0](0) == 1.5);
  CHECK(g.power == 4.0);
  REQUIRE(g.gamma.has_value());
  CHECK((*g.gamma)(0) == 0.25);
  CHECK(std::isinf((*g.gamma)(1)));
  CHECK(!g.multi_antenna());
  const SecrecyProblem p = g.problem();
  CHECK(p.mode == AntennaMode::SingleAntenna);
  CHECK(p.sigma2(1) == 0.5);
}

TEST_CASE("channel file formats") {
  SUBCASE("flat eavesdropper vectors fix N") {
    const ChannelFile f = parse_channels(R"({"Hs": [[1,0],[0,1],[2,0],[0,0]],
      "eavesdroppers": [[[1,0],[0,0]]], "sigma2": [1.0], "P": 2})");
    CHECK(f.hs.rows() == 2);
    CHECK(f.hs.cols() == 2);
    CHECK(f.hs(1, 0) == cplx(2.0, 0.0));
    CHECK(f.eavesdroppers[0].rows() == 2);
  }
  SUBCASE("multi-antenna eavesdroppers") {
    const ChannelFile f = parse_channels(R"({"Hs": [[[1,0]],[[0,1]]],
      "eavesdroppers": [[[[1,0],[0,0]],[[0,0],[1,0]]]], "sigma2": [[1.0, 2.0]], "P": 2})");
    CHECK(f.multi_antenna());
    const SecrecyProblem p = f.problem();
    CHECK(p.mode == AntennaMode::MultiAntenna);
    CHECK(p.noise[0](1) == 2.0);
  }
  SUBCASE("malformed input") {
    CHECK_THROWS_AS(parse_channels("{"), std::invalid_argument);
    CHECK_THROWS_AS(parse_channels(R"({"Hs": [[[1,0]]], "P": 1})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_channels(R"({"Hs": [[[1,0]]], "eavesdroppers": [[[[1,0]]]], "sigma2": [1, 2], "P": 1})"),
                    std::invalid_argument);
  }
}

TEST_CASE("format_number keeps 12 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(12345.678901234567) == "12345.6789012");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("sweep CSV layout and reproducibility") {
  ExperimentConfig cfg;
  cfg.k = 1;
  cfg.trials = 2;
  cfg.p_db_grid = {0.0, 5.0};
  const SweepResult a = sweep(cfg, true);
  const SweepResult b = sweep(cfg, false);
  std::ostringstream ca;
  std::ostringstream cb;
  write_sweep_csv(ca, a.rows);
  write_sweep_csv(cb, b.rows);
  CHECK(ca.str() == cb.str());

  std::istringstream lines(ca.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "p_db,method,mean_rate_nats,mean_rate_bits,std_error_nats,trials,failures");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 2 * 3);  // alg1, psvd, alg2 per power

  for (const auto& r : a.rows) {
    CHECK(r.trials == 2);
    CHECK(r.failures == 0);
    CHECK(r.mean_bits == doctest::Approx(r.mean_nats / std::log(2.0)));
  }

  const auto manifest = nlohmann::json::parse(sweep_manifest(cfg, a));
  CHECK(manifest["config"]["trials"] == 2);
  REQUIRE(manifest["trials"].size() == 4);
  CHECK(manifest["trials"][0]["digest"].get<std::string>() == channel_digest(gen_channels(cfg, 0)));
  CHECK(manifest["trials"][0]["methods"][0].contains("seconds"));
  CHECK(manifest["version"].get<std::string>() == code_version());
}

TEST_CASE("sweep rows aggregate the per-trial rates") {
  ExperimentConfig cfg;
  cfg.mode = "pa";
  cfg.trials = 3;
  cfg.p_db_grid = {3.0};
  const SweepResult r = sweep(cfg);
  double sum = 0.0;
  for (const auto& rec : r.records) sum += rec.methods[0].rate;
  CHECK(r.rows[0].method == "pa");
  CHECK(r.rows[0].mean_nats == doctest::Approx(sum / 3.0));
  // Removing the limits can only help.
  CHECK(r.rows[1].mean_nats >= r.rows[0].mean_nats - 1e-9);
}

TEST_CASE("scan surface") {
  ExperimentConfig cfg;
  cfg.k = 2;
  cfg.seed = 4;
  const ScanResult s = scan_surface(cfg, 5.0, 0, 12);
  CHECK(s.verdict);
  REQUIRE(s.log_f.size() == 144);
  // At Gamma = 0 every denominator is 1.
  const SecrecyProblem p = single_antenna_problem(gen_channels(cfg, 0), cfg.sigma2, db_to_linear(5.0));
  CHECK(s.log_f[0] == doctest::Approx(std::log(eval_g(cr_channels(p), RealVector::Zero(2)))).epsilon(1e-8));
  const ScanResult serial = scan_surface(cfg, 5.0, 0, 12, false);
  CHECK(serial.log_f == s.log_f);

  cfg.k = 1;
  CHECK(scan_surface(cfg, 5.0, 0, 30).verdict);
  cfg.k = 3;
  CHECK_THROWS(scan_surface(cfg, 5.0));
}

TEST_CASE("shape checks") {
  CHECK(is_unimodal({0.0, 1.0, 2.0, 1.0, 0.5}, 1e-9));
  CHECK(!is_unimodal({0.0, 1.0, 0.0, 1.0}, 1e-9));
  const std::vector<double> ok{0, 1, 0, 1, 2, 1, 0, 1, 0};
  CHECK(rows_contiguous(ok, 3, 3, 25, 1e-9));
  const std::vector<double> split{2, 0, 2, 0, 0, 0, 0, 0, 0};
  CHECK(!rows_contiguous(split, 3, 3, 25, 1e-9));
}

TEST_CASE("selftest across seeds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto reports = selftest(SelftestOptions{seed, false});
    for (const auto& r : reports) {
      INFO("seed " << seed << ": " << r.name << " worst " << r.worst);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("selftest flags a corrupted gradient") {
  const auto reports = selftest(SelftestOptions{1, true});
  bool flagged = false;
  for (const auto& r : reports) {
    if (r.name == "grad_g_finite_difference") flagged = !r.pass;
  }
  CHECK(flagged);
  CHECK(format_report(reports).find("FAIL") != std::string::npos);
}
