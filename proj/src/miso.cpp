#include "secrecy/algorithms.hpp"
#include "secrecy/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secrecy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Level test: slack_i(S) = 1 - t + <C_i, S>, C_i = hs hs^H - (t / sigma_i^2) h_i h_i^H,
// maximized in its minimum over {S >= 0, tr S <= P}.
class MisoLevel {
 public:
  MisoLevel(const SecrecyProblem& p, double t) : power_(p.power), t_(t) {
    const ComplexMatrix main = p.hs * p.hs.adjoint();
    for (std::size_t i = 0; i < p.eavesdropper_count(); ++i) {
      const ComplexMatrix& h = p.eavesdroppers[i];
      c_.push_back(hermitian_part(main - (t / p.sigma2(i)) * (h * h.adjoint())));
    }
  }

  RealVector slacks(const ComplexMatrix& s) const {
    RealVector out(static_cast<Eigen::Index>(c_.size()));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      out(static_cast<Eigen::Index>(i)) = 1.0 - t_ + (c_[i] * s).trace().real();
    }
    return out;
  }

  // Softmin at temperature tau with its gradient in S.
  double smooth(const ComplexMatrix& s, double tau, ComplexMatrix* grad, RealVector* weights = nullptr) const {
    const RealVector r = slacks(s);
    const double lo = r.minCoeff();
    RealVector w = (-(r.array() - lo) / tau).exp();
    const double z = w.sum();
    w /= z;
    if (grad) {
      grad->setZero(s.rows(), s.cols());
      for (std::size_t i = 0; i < c_.size(); ++i) *grad += w(static_cast<Eigen::Index>(i)) * c_[i];
    }
    if (weights) *weights = w;
    return lo - tau * std::log(z);
  }

  // max_S sum_i w_i slack_i(S) = 1 - t + P max(0, lambda_max(sum w_i C_i)): an upper
  // bound on the best minimum slack for any w on the simplex.
  double dual_bound(const RealVector& w, RealVector* subgrad = nullptr) const {
    ComplexMatrix m = ComplexMatrix::Zero(c_[0].rows(), c_[0].cols());
    for (std::size_t i = 0; i < c_.size(); ++i) m += w(static_cast<Eigen::Index>(i)) * c_[i];
    const EigDecomposition e = eigh(hermitian_part(m));
    const double top = std::max(0.0, e.values(0));
    if (subgrad) {
      subgrad->resize(w.size());
      for (std::size_t i = 0; i < c_.size(); ++i) {
        const ComplexVector v = e.vectors.col(0);
        const double along = top > 0.0 ? power_ * (v.adjoint() * c_[i] * v)(0, 0).real() : 0.0;
        (*subgrad)(static_cast<Eigen::Index>(i)) = 1.0 - t_ + along;
      }
    }
    return 1.0 - t_ + power_ * top;
  }

  // Minimizes the dual bound over the simplex; exact for one eavesdropper.
  double certify(int iterations) const {
    const auto k = static_cast<Eigen::Index>(c_.size());
    if (k == 1) return dual_bound(RealVector::Ones(1));
    // Free coordinates w_1..w_{k-1}, w_k = 1 - sum.
    const Eigen::Index d = k - 1;
    Ellipsoid region(RealVector::Constant(d, 0.5), RealVector::Constant(d, 0.5));
    double best = kInf;
    for (int it = 0; it < iterations; ++it) {
      const RealVector x = region.center();
      RealVector cut = RealVector::Zero(d);
      double depth = 0.0;
      const double rest = 1.0 - x.sum();
      Eigen::Index neg = -1;
      for (Eigen::Index j = 0; j < d; ++j) {
        if (x(j) < 0.0 && (neg < 0 || x(j) < x(neg))) neg = j;
      }
      if (neg >= 0) {
        cut(neg) = -1.0;
        depth = -x(neg);
      } else if (rest < 0.0) {
        cut.setOnes();
        depth = -rest;
      } else {
        RealVector w(k);
        w.head(d) = x;
        w(d) = rest;
        RealVector g;
        const double val = dual_bound(w, &g);
        best = std::min(best, val);
        cut = g.head(d).array() - g(d);
        depth = val - best;
        if (cut.norm() <= 1e-15) break;
      }
      if (!region.cut(cut, depth)) break;
    }
    return best;
  }

  double power() const { return power_; }

 private:
  double power_;
  double t_;
  std::vector<ComplexMatrix> c_;
};

struct Ascent {
  ComplexMatrix s;
  double min_slack = -kInf;
};

// Projected gradient ascent on the softmin with decreasing temperature, keeping the
// iterate with the best true minimum slack.
Ascent ascend(const MisoLevel& level, ComplexMatrix s, int iterations, double scale, double target) {
  const double taus[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-6};
  Ascent best{s, level.slacks(s).minCoeff()};
  const int per_stage = std::max(1, iterations / 5);
  for (double tau_rel : taus) {
    const double tau = tau_rel * scale;
    double step = 1.0 / scale;
    ComplexMatrix grad;
    double f = level.smooth(s, tau, &grad);
    for (int it = 0; it < per_stage; ++it) {
      bool ok = false;
      ComplexMatrix next;
      double fn = 0.0;
      for (int ls = 0; ls < 50; ++ls, step *= 0.5) {
        next = project_spectraplex(s + step * grad, level.power());
        fn = level.smooth(next, tau, nullptr);
        if (fn >= f + 1e-4 * (grad.adjoint() * (next - s)).trace().real()) {
          ok = true;
          break;
        }
      }
      if (!ok) break;
      const double moved = (next - s).norm();
      s = next;
      f = level.smooth(s, tau, &grad);
      step = std::min(step * 2.0, 1e6);
      const double m = level.slacks(s).minCoeff();
      if (m > best.min_slack) best = {s, m};
      if (best.min_slack >= target || moved <= 1e-14 * (1.0 + level.power())) break;
    }
    if (best.min_slack >= target) break;
  }
  return best;
}

}  // namespace

MisoSolution miso_solve(const SecrecyProblem& p, double eps_rate, const MisoOptions& options) {
  p.validate();
  if (p.hs.cols() != 1) throw std::invalid_argument("miso_solve: single receive antenna required");
  if (p.mode != AntennaMode::SingleAntenna) throw std::invalid_argument("miso_solve: single-antenna eavesdroppers required");
  if (!(eps_rate > 0.0)) throw std::invalid_argument("miso_solve: eps must be positive");
  const Eigen::Index n = p.tx_antennas();

  double log_lo = 0.0;  // t = 1 is met by S = 0
  double log_hi = std::log1p(p.power * p.hs.squaredNorm());
  ComplexMatrix witness = ComplexMatrix::Zero(n, n);
  ComplexMatrix start = (p.power / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
  int levels = 0;
  bool unsettled = false;
  while (log_hi - log_lo > eps_rate && levels < 200) {
    ++levels;
    const double log_t = 0.5 * (log_lo + log_hi);
    const double t = std::exp(log_t);
    const MisoLevel level(p, t);
    Ascent a = ascend(level, start, options.ascent_iterations, 1.0 + t, 0.0);
    if (a.min_slack < -options.slack_tol) {
      // The softmin stalls near kinks; a longer run from the best iterate usually settles it.
      const Ascent more = ascend(level, a.s, options.polish_iterations, 1.0 + t, 0.0);
      if (more.min_slack > a.min_slack) a = more;
    }
    if (a.min_slack >= -options.slack_tol) {
      log_lo = log_t;
      witness = a.s;
      start = a.s;
      continue;
    }
    // No witness. Every slack drops by at least delta when t grows by delta, so a dual
    // bound d >= 0 still caps the optimum at t + d, and the best iterate (min slack
    // a < 0) is a witness at t + a.
    const double d = level.certify(400);
    if (d < -options.slack_tol) {
      log_hi = log_t;
      continue;
    }
    const double capped = std::log(t + std::max(d, 0.0));
    const double floor = t + a.min_slack > 0.0 ? std::log(t + a.min_slack) : log_lo;
    if (capped >= log_hi && floor <= log_lo) {
      unsettled = true;
      break;
    }
    if (capped < log_hi) log_hi = capped;
    if (floor > log_lo) {
      log_lo = floor;
      witness = a.s;
      start = a.s;
    }
  }
  if (log_hi - log_lo > eps_rate) unsettled = true;

  // Polish at the certified level: maximize the minimum slack itself.
  const double t_final = std::exp(log_lo);
  if (log_lo > 0.0) {
    const MisoLevel level(p, t_final);
    const Ascent a = ascend(level, witness, options.polish_iterations, 1.0 + t_final, kInf);
    if (a.min_slack >= level.slacks(witness).minCoeff()) witness = a.s;
  }

  MisoSolution out;
  out.solution = describe_covariance(witness, p);
  out.solution.t_star = t_final;
  out.solution.iterations = levels;
  out.solution.status = unsettled ? SecrecyStatus::Indeterminate : SecrecyStatus::Converged;
  const RealVector ev = eigvalsh(hermitian_part(witness));
  out.eigen_ratio = ev.size() > 1 && ev(0) > 0.0 ? std::max(0.0, ev(1)) / ev(0) : 0.0;
  return out;
}

}  // namespace secrecy
