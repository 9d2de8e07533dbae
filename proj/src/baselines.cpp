#include "secrecy/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace secrecy {

void OracleConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("OracleConfig: restarts must be >= 1");
  if (max_iters < 0) throw std::invalid_argument("OracleConfig: max_iters must be >= 0");
  if (step_rule != "armijo" && step_rule != "diminishing") {
    throw std::invalid_argument("OracleConfig: unknown step rule '" + step_rule + "'");
  }
}

RealVector budget_waterfill(const RealVector& gains, double budget) {
  RealVector p = RealVector::Zero(gains.size());
  if (!(budget > 0.0)) return p;
  double top = 0.0;
  double inv_max = 0.0;
  for (Eigen::Index k = 0; k < gains.size(); ++k) {
    if (gains(k) > 1e-300) {
      top = std::max(top, gains(k));
      inv_max = std::max(inv_max, 1.0 / gains(k));
    }
  }
  if (top <= 0.0) return p;
  auto used = [&](double level) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < gains.size(); ++k) {
      if (gains(k) > 1e-300) s += std::max(0.0, level - 1.0 / gains(k));
    }
    return s;
  };
  double lo = 0.0;
  double hi = budget + inv_max;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (used(mid) > budget ? hi : lo) = mid;
  }
  // Exact level on the active set found by the bisection.
  double level = 0.5 * (lo + hi);
  double inv_sum = 0.0;
  int active = 0;
  for (Eigen::Index k = 0; k < gains.size(); ++k) {
    if (gains(k) > 1e-300 && level - 1.0 / gains(k) > 0.0) {
      inv_sum += 1.0 / gains(k);
      ++active;
    }
  }
  if (active > 0) level = (budget + inv_sum) / active;
  for (Eigen::Index k = 0; k < gains.size(); ++k) {
    if (gains(k) > 1e-300) p(k) = std::max(0.0, level - 1.0 / gains(k));
  }
  return p;
}

PsvdResult p_svd_rate(const SecrecyProblem& p) {
  p.validate();
  const Eigen::Index n = p.tx_antennas();
  Eigen::Index cols = 0;
  for (const auto& g : p.eavesdroppers) cols += g.cols();
  ComplexMatrix stacked(n, cols);
  Eigen::Index c = 0;
  for (const auto& g : p.eavesdroppers) {
    stacked.middleCols(c, g.cols()) = g;
    c += g.cols();
  }
  const ComplexMatrix proj = complement_projector(stacked);
  const ComplexMatrix hp = proj * p.hs;
  const EigDecomposition e = eigh(hermitian_part(hp * hp.adjoint()));
  const RealVector alloc = budget_waterfill(e.values, p.power);
  PsvdResult out;
  out.covariance = hermitian_part(e.vectors * alloc.asDiagonal() * e.vectors.adjoint());
  // Clean numerical leakage outside the complement.
  out.covariance = hermitian_part(proj * out.covariance * proj);
  double rate = 0.0;
  for (Eigen::Index k = 0; k < alloc.size(); ++k) rate += std::log1p(alloc(k) * std::max(0.0, e.values(k)));
  out.rate = rate;
  return out;
}

namespace {

ComplexMatrix random_covariance(std::mt19937_64& rng, Eigen::Index n, double power) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> ud(0.05, 1.0);
  ComplexMatrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) a(j, k) = cplx(nd(rng), nd(rng));
  }
  ComplexMatrix s = a * a.adjoint();
  s *= power * ud(rng) / s.trace().real();
  return hermitian_part(s);
}

// Gradient of log det(I + G^H S G) with respect to S.
ComplexMatrix logdet_gradient(const ComplexMatrix& g, const ComplexMatrix& s) {
  ComplexMatrix x = g.adjoint() * s * g;
  x.diagonal().array() += 1.0;
  return hermitian_part(g * x.ldlt().solve(g.adjoint()));
}

struct Rates {
  RealVector r;
  ComplexMatrix grad_main;
  std::vector<ComplexMatrix> grad_leak;
};

class SecrecyObjective {
 public:
  explicit SecrecyObjective(const SecrecyProblem& p) : p_(p) {
    for (std::size_t i = 0; i < p.eavesdropper_count(); ++i) whitened_.push_back(p.whitened_eavesdropper(i));
  }

  RealVector rates(const ComplexMatrix& s) const {
    const double main = logdet_capacity(p_.hs, s);
    RealVector r(static_cast<Eigen::Index>(whitened_.size()));
    for (std::size_t i = 0; i < whitened_.size(); ++i) {
      r(static_cast<Eigen::Index>(i)) = main - logdet_capacity(whitened_[i], s);
    }
    return r;
  }

  // Softmin of the rates at temperature tau, and its gradient.
  double smooth(const ComplexMatrix& s, double tau, ComplexMatrix* grad) const {
    const RealVector r = rates(s);
    const double lo = r.minCoeff();
    RealVector w = (-(r.array() - lo) / tau).exp();
    const double z = w.sum();
    w /= z;
    const double value = lo - tau * std::log(z);
    if (grad) {
      *grad = logdet_gradient(p_.hs, s);
      for (std::size_t i = 0; i < whitened_.size(); ++i) {
        *grad -= w(static_cast<Eigen::Index>(i)) * logdet_gradient(whitened_[i], s);
      }
    }
    return value;
  }

 private:
  const SecrecyProblem& p_;
  std::vector<ComplexMatrix> whitened_;
};

double inner(const ComplexMatrix& a, const ComplexMatrix& b) { return (a.adjoint() * b).trace().real(); }

}  // namespace

double brute_force_secrecy(const SecrecyProblem& p, const OracleConfig& cfg) {
  p.validate();
  cfg.validate();
  const Eigen::Index n = p.tx_antennas();
  const SecrecyObjective obj(p);
  std::mt19937_64 rng(cfg.seed);
  const double taus[] = {1e-1, 1e-2, 1e-3, 1e-4, 1e-6};
  const int stages = 5;
  const int per_stage = cfg.max_iters / stages;

  double best = 0.0;  // S = 0
  for (int r = 0; r < cfg.restarts; ++r) {
    ComplexMatrix s;
    if (r == 0) {
      s = ComplexMatrix::Zero(n, n);
    } else if (r == 1) {
      s = ComplexMatrix::Identity(n, n) * (p.power / static_cast<double>(n));
    } else {
      s = random_covariance(rng, n, p.power);
    }
    best = std::max(best, obj.rates(s).minCoeff());
    double step = 1.0;
    int k = 0;
    for (int stage = 0; stage < stages; ++stage) {
      const double tau = taus[stage];
      ComplexMatrix grad;
      double f = obj.smooth(s, tau, &grad);
      for (int it = 0; it < per_stage; ++it, ++k) {
        ComplexMatrix next;
        double fn = 0.0;
        if (cfg.step_rule == "diminishing") {
          const double a = p.power / ((1.0 + grad.norm()) * std::sqrt(1.0 + k));
          next = project_spectraplex(s + a * grad, p.power);
          fn = obj.smooth(next, tau, nullptr);
        } else {
          bool ok = false;
          for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
            next = project_spectraplex(s + step * grad, p.power);
            fn = obj.smooth(next, tau, nullptr);
            if (fn >= f + 1e-4 * inner(grad, next - s)) {
              ok = true;
              break;
            }
          }
          if (!ok) break;
          step = std::min(step * 2.0, 1e6);
        }
        const double moved = (next - s).norm();
        s = next;
        f = obj.smooth(s, tau, &grad);
        best = std::max(best, obj.rates(s).minCoeff());
        if (moved <= 1e-13 * (1.0 + p.power)) break;
      }
    }
  }
  return best;
}

namespace {

struct HalfSpace {
  ComplexMatrix normal;  // Hermitian
  double bound = 0.0;
  double norm2 = 0.0;
};

// Euclidean projection onto {S >= 0, <A_j, S> <= b_j}: S(nu) = Pi_psd(X - sum nu_j A_j)
// with nu >= 0 maximizing the smooth concave dual, by accelerated projected ascent.
ComplexMatrix project_feasible(const ComplexMatrix& x, const std::vector<HalfSpace>& sets, RealVector& nu) {
  const auto m = static_cast<Eigen::Index>(sets.size());
  auto primal = [&](const RealVector& nu) {
    ComplexMatrix y = x;
    for (Eigen::Index j = 0; j < m; ++j) y -= nu(j) * sets[static_cast<std::size_t>(j)].normal;
    return project_psd(y);
  };
  auto gradient = [&](const ComplexMatrix& s) {
    RealVector g(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const HalfSpace& h = sets[static_cast<std::size_t>(j)];
      g(j) = inner(h.normal, s) - h.bound;
    }
    return g;
  };
  double lip = 0.0;
  for (const auto& h : sets) lip += h.norm2;
  if (nu.size() != m) nu = RealVector::Zero(m);
  RealVector w = nu;
  double momentum = 1.0;
  ComplexMatrix s = primal(nu);
  for (int it = 0; it < 5000; ++it) {
    const RealVector g = gradient(s);
    bool done = true;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double b = sets[static_cast<std::size_t>(j)].bound;
      if (g(j) > 1e-13 * (1.0 + b) || (nu(j) > 0.0 && g(j) < -1e-10 * (1.0 + b))) done = false;
    }
    if (done) break;
    const RealVector next = (w + gradient(primal(w)) / lip).cwiseMax(0.0);
    const double t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    w = next + ((momentum - 1.0) / t) * (next - nu);
    momentum = t;
    nu = next;
    s = primal(nu);
  }
  return s;
}

}  // namespace

double brute_force_pa(const CrProblem& p, const OracleConfig& cfg) {
  p.validate();
  cfg.validate();
  const auto& ch = p.channels;
  const Eigen::Index n = ch.tx_antennas();
  std::vector<HalfSpace> sets;
  sets.push_back({ComplexMatrix::Identity(n, n), ch.power, static_cast<double>(n)});
  std::vector<ComplexMatrix> grams;
  std::vector<double> limits;
  ComplexMatrix nulled;  // columns whose limit is zero
  for (std::size_t i = 0; i < ch.pu_channels.size(); ++i) {
    const double limit = p.it_limits(static_cast<Eigen::Index>(i));
    if (std::isinf(limit)) continue;
    const ComplexMatrix gram = hermitian_part(ch.pu_channels[i] * ch.pu_channels[i].adjoint());
    if (gram.norm() == 0.0) continue;
    if (limit <= 1e-12 * (1.0 + ch.power * gram.norm())) {
      const ComplexMatrix& g = ch.pu_channels[i];
      ComplexMatrix grown(n, nulled.cols() + g.cols());
      if (nulled.cols() > 0) grown.leftCols(nulled.cols()) = nulled;
      grown.rightCols(g.cols()) = g;
      nulled = grown;
    }
    sets.push_back({gram, limit, gram.squaredNorm()});
    grams.push_back(gram);
    limits.push_back(limit);
  }
  const ComplexMatrix keep = nulled.cols() > 0 ? complement_projector(nulled) : ComplexMatrix::Identity(n, n);

  // Exact projection, then the (tiny) rescaling that removes its rounding.
  RealVector warm;  // multipliers of the previous projection
  auto feasible = [&](const ComplexMatrix& s) {
    ComplexMatrix x = hermitian_part(keep * project_feasible(s, sets, warm) * keep);
    double scale = 1.0;
    const double tr = x.trace().real();
    if (tr > ch.power) scale = ch.power / tr;
    for (std::size_t i = 0; i < grams.size(); ++i) {
      const double leak = inner(grams[i], x);
      if (leak > limits[i]) scale = std::min(scale, limits[i] / leak);
    }
    return ComplexMatrix(scale * x);
  };

  std::mt19937_64 rng(cfg.seed);
  double best = 0.0;
  // The problem is concave; a second start only guards against stalls.
  const int starts = std::min(cfg.restarts, 2);
  for (int r = 0; r < starts; ++r) {
    ComplexMatrix s = feasible(r == 0 ? ComplexMatrix::Zero(n, n) : random_covariance(rng, n, ch.power));
    double f = logdet_capacity(ch.hs, s);
    double step = 1.0;
    for (int it = 0; it < cfg.max_iters; ++it) {
      const ComplexMatrix grad = logdet_gradient(ch.hs, s);
      ComplexMatrix next;
      double fn = 0.0;
      if (cfg.step_rule == "diminishing") {
        next = feasible(s + (ch.power / ((1.0 + grad.norm()) * std::sqrt(1.0 + it))) * grad);
        fn = logdet_capacity(ch.hs, next);
      } else {
        bool ok = false;
        for (int ls = 0; ls < 50; ++ls, step *= 0.5) {
          next = feasible(s + step * grad);
          fn = logdet_capacity(ch.hs, next);
          if (fn >= f + 1e-4 * inner(grad, next - s)) {
            ok = true;
            break;
          }
        }
        if (!ok) break;
        step = std::min(step * 2.0, 1e6);
      }
      const double moved = (next - s).norm();
      s = next;
      f = fn;
      best = std::max(best, fn);
      if (moved <= 1e-11 * (1.0 + ch.power)) break;
    }
    best = std::max(best, f);
  }
  return best;
}

RealVector finite_diff_grad(const std::function<double(const RealVector&)>& f, const RealVector& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: step must be positive");
  RealVector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    RealVector up = x;
    up(i) += h;
    if (x(i) - h >= 0.0) {
      RealVector down = x;
      down(i) -= h;
      out(i) = (f(up) - f(down)) / (2.0 * h);
    } else {
      out(i) = (f(up) - f(x)) / h;
    }
  }
  return out;
}

}  // namespace secrecy
