#include "secrecy/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace secrecy {

namespace {

void require_matrix_mode(const SecrecyProblem& p) {
  p.validate();
  if (p.mode != AntennaMode::MultiAntenna) throw std::invalid_argument("bounds: multi-antenna eavesdroppers required");
}

SecrecyStatus worse(SecrecyStatus a, SecrecyStatus b) {
  if (a == SecrecyStatus::Indeterminate || b == SecrecyStatus::Indeterminate) return SecrecyStatus::Indeterminate;
  return a == SecrecyStatus::Converged ? b : a;
}

}  // namespace

LowerBound lower_bound_multiantenna(const SecrecyProblem& p, double eps_rate, const LevelOptions& options) {
  require_matrix_mode(p);
  if (!(eps_rate > 0.0)) throw std::invalid_argument("lower_bound_multiantenna: eps must be positive");
  CrChannels ch;
  ch.hs = p.hs;
  ch.power = p.power;
  std::vector<Denominator> dens;
  for (std::size_t i = 0; i < p.eavesdropper_count(); ++i) {
    // Noise is absorbed into the columns, so each antenna sees unit noise.
    ch.pu_channels.push_back(p.whitened_eavesdropper(i));
    const auto rank = static_cast<double>(std::min(p.eavesdroppers[i].cols(), p.tx_antennas()));
    dens.push_back({rank, rank});
  }
  LevelOptions opts = options;
  opts.eps_rate = eps_rate;
  const LevelProblem lp(std::move(ch), std::move(dens), opts.pa);
  const LevelResult res = level_search(lp, opts);
  return {res.log_t_min, res.covariance, res.status, res.pa_solves + 1};
}

SecrecyProblem split_antennas(const SecrecyProblem& p) {
  require_matrix_mode(p);
  std::vector<ComplexVector> columns;
  std::vector<double> noise;
  for (std::size_t i = 0; i < p.eavesdropper_count(); ++i) {
    for (Eigen::Index j = 0; j < p.eavesdroppers[i].cols(); ++j) {
      columns.push_back(p.eavesdroppers[i].col(j));
      noise.push_back(p.noise[i](j));
    }
  }
  return SecrecyProblem::single_antenna(p.hs, columns, noise, p.power);
}

SecrecySolution upper_bound_multiantenna(const SecrecyProblem& p, double eps_rate, const LevelOptions& options) {
  return algorithm1(split_antennas(p), eps_rate, options);
}

BoundsResult bounds(const SecrecyProblem& p, double eps_rate, const LevelOptions& options) {
  const LowerBound lo = lower_bound_multiantenna(p, eps_rate, options);
  const SecrecySolution up = upper_bound_multiantenna(p, eps_rate, options);
  BoundsResult out;
  out.lower_bound = lo.rate;
  out.s_lower = lo.covariance;
  out.achievable_rate = secrecy_rate(lo.covariance, p);
  out.upper_bound = up.secrecy_rate;
  out.status = worse(lo.status, up.status);
  out.pa_solves = lo.pa_solves + up.pa_solves;
  return out;
}

}  // namespace secrecy
