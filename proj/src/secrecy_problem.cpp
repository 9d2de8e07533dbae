#include "secrecy/secrecy_problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace secrecy {

SecrecyProblem SecrecyProblem::single_antenna(ComplexMatrix hs, const std::vector<ComplexVector>& eavesdroppers,
                                              const std::vector<double>& noise_vars, double power) {
  if (eavesdroppers.size() != noise_vars.size()) {
    throw std::invalid_argument("SecrecyProblem: one noise variance per eavesdropper required");
  }
  SecrecyProblem p;
  p.hs = std::move(hs);
  p.power = power;
  p.mode = AntennaMode::SingleAntenna;
  for (std::size_t i = 0; i < eavesdroppers.size(); ++i) {
    p.eavesdroppers.emplace_back(eavesdroppers[i]);
    p.noise.push_back(RealVector::Constant(1, noise_vars[i]));
  }
  p.validate();
  return p;
}

SecrecyProblem SecrecyProblem::multi_antenna(ComplexMatrix hs, std::vector<ComplexMatrix> eavesdroppers, double power,
                                             std::vector<RealVector> noise) {
  SecrecyProblem p;
  p.hs = std::move(hs);
  p.power = power;
  p.mode = AntennaMode::MultiAntenna;
  p.eavesdroppers = std::move(eavesdroppers);
  if (noise.empty()) {
    for (const auto& g : p.eavesdroppers) p.noise.push_back(RealVector::Ones(g.cols()));
  } else {
    p.noise = std::move(noise);
  }
  p.validate();
  return p;
}

void SecrecyProblem::validate() const {
  if (hs.rows() == 0 || hs.cols() == 0) throw std::invalid_argument("SecrecyProblem: empty main channel");
  if (!all_finite(hs)) throw std::invalid_argument("SecrecyProblem: non-finite main channel");
  if (!(power > 0.0) || !std::isfinite(power)) throw std::invalid_argument("SecrecyProblem: power must be positive");
  if (eavesdroppers.empty()) throw std::invalid_argument("SecrecyProblem: at least one eavesdropper required");
  if (noise.size() != eavesdroppers.size()) throw std::invalid_argument("SecrecyProblem: noise list size mismatch");
  for (std::size_t i = 0; i < eavesdroppers.size(); ++i) {
    const auto& g = eavesdroppers[i];
    if (g.rows() != hs.rows()) throw std::invalid_argument("SecrecyProblem: eavesdropper dimension mismatch");
    if (!all_finite(g)) throw std::invalid_argument("SecrecyProblem: non-finite eavesdropper channel");
    if (mode == AntennaMode::SingleAntenna && g.cols() != 1) {
      throw std::invalid_argument("SecrecyProblem: single-antenna mode requires N x 1 eavesdropper channels");
    }
    if (mode == AntennaMode::MultiAntenna && g.cols() != eavesdroppers.front().cols()) {
      throw std::invalid_argument("SecrecyProblem: eavesdroppers must share the antenna count");
    }
    if (noise[i].size() != g.cols()) throw std::invalid_argument("SecrecyProblem: one noise variance per antenna");
    for (Eigen::Index j = 0; j < noise[i].size(); ++j) {
      if (!(noise[i](j) > 0.0) || !std::isfinite(noise[i](j))) {
        throw std::invalid_argument("SecrecyProblem: noise variances must be positive");
      }
    }
  }
}

ComplexMatrix SecrecyProblem::whitened_eavesdropper(std::size_t i) const {
  ComplexMatrix g = eavesdroppers[i];
  for (Eigen::Index j = 0; j < g.cols(); ++j) g.col(j) /= std::sqrt(noise[i](j));
  return g;
}

std::string to_string(SecrecyStatus status) {
  switch (status) {
    case SecrecyStatus::Converged: return "converged";
    case SecrecyStatus::Indeterminate: return "indeterminate";
    case SecrecyStatus::PaNotConverged: return "pa_not_converged";
  }
  return "unknown";
}

RealVector leakage_terms(const ComplexMatrix& s, const SecrecyProblem& p) {
  if (s.rows() != p.tx_antennas() || s.cols() != p.tx_antennas()) {
    throw std::invalid_argument("leakage_terms: covariance dimension mismatch");
  }
  RealVector out(static_cast<Eigen::Index>(p.eavesdropper_count()));
  for (std::size_t i = 0; i < p.eavesdropper_count(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (p.mode == AntennaMode::SingleAntenna) {
      out(k) = std::log1p(std::max(0.0, received_power(p.eavesdroppers[i], s)) / p.sigma2(i));
    } else {
      out(k) = logdet_capacity(p.whitened_eavesdropper(i), s);
    }
  }
  return out;
}

double secrecy_rate(const ComplexMatrix& s, const SecrecyProblem& p) {
  p.validate();
  return logdet_capacity(p.hs, s) - leakage_terms(s, p).maxCoeff();
}

SecrecySolution describe_covariance(const ComplexMatrix& s, const SecrecyProblem& p) {
  SecrecySolution out;
  out.covariance = s;
  out.per_eav_leakage = leakage_terms(s, p);
  const double main = logdet_capacity(p.hs, s);
  out.secrecy_rate = main - out.per_eav_leakage.maxCoeff();
  out.gamma_star.resize(static_cast<Eigen::Index>(p.eavesdropper_count()));
  for (std::size_t i = 0; i < p.eavesdropper_count(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out.gamma_star(k) = received_power(p.eavesdroppers[i], s);
    if (main - out.per_eav_leakage(k) <= out.secrecy_rate + 1e-9) out.binding.push_back(i);
  }
  return out;
}

CrChannels cr_channels(const SecrecyProblem& p) {
  CrChannels ch;
  ch.hs = p.hs;
  ch.power = p.power;
  ch.pu_channels = p.eavesdroppers;
  return ch;
}

}  // namespace secrecy
