#include "secrecy/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>
#include <string_view>

namespace secrecy {

void ExperimentConfig::validate() const {
  if (m < 1 || n < 1 || k < 1 || ne < 1) throw std::invalid_argument("config: antenna and user counts must be >= 1");
  if (p_db_grid.empty()) throw std::invalid_argument("config: empty power grid");
  for (double p : p_db_grid) {
    if (!std::isfinite(p)) throw std::invalid_argument("config: power grid entries must be finite");
  }
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (!(eps_rate > 0.0)) throw std::invalid_argument("config: eps must be positive");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("config: sigma2 must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("config: gamma must be >= 0");
  if (mode != "secrecy" && mode != "pa" && mode != "bounds") {
    throw std::invalid_argument("config: mode must be secrecy, pa or bounds");
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string rng_name() { return "mt19937_64 seeded by seed_seq{seed, trial}; normal_distribution(0, sqrt(1/2))"; }

ChannelDraw gen_channels(const ExperimentConfig& cfg, int trial) {
  if (trial < 0) throw std::invalid_argument("gen_channels: negative trial index");
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  auto draw = [&](int rows, int cols) {
    ComplexMatrix a(rows, cols);
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < rows; ++r) {
        const double re = nd(rng);
        a(r, c) = cplx(re, nd(rng));
      }
    }
    return a;
  };
  ChannelDraw out;
  out.hs = draw(cfg.n, cfg.m);
  for (int i = 0; i < cfg.k; ++i) out.eavesdroppers.push_back(draw(cfg.n, cfg.ne));
  return out;
}

std::string channel_digest(const ChannelDraw& draw) {
  std::string bytes;
  auto add = [&](const ComplexMatrix& a) {
    bytes.append(reinterpret_cast<const char*>(a.data()), static_cast<std::size_t>(a.size()) * sizeof(cplx));
  };
  add(draw.hs);
  for (const auto& e : draw.eavesdroppers) add(e);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string_view>{}(bytes));
  return buf;
}

SecrecyProblem single_antenna_problem(const ChannelDraw& draw, double sigma2, double power) {
  std::vector<ComplexVector> eav;
  for (const auto& e : draw.eavesdroppers) eav.push_back(e.col(0));
  return SecrecyProblem::single_antenna(draw.hs, eav, std::vector<double>(eav.size(), sigma2), power);
}

SecrecyProblem multi_antenna_problem(const ChannelDraw& draw, double sigma2, double power) {
  std::vector<RealVector> noise;
  for (const auto& e : draw.eavesdroppers) noise.push_back(RealVector::Constant(e.cols(), sigma2));
  return SecrecyProblem::multi_antenna(draw.hs, draw.eavesdroppers, power, noise);
}

}  // namespace secrecy
