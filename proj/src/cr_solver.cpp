#include "secrecy/cr_solver.hpp"

#include "secrecy/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secrecy {

void CrChannels::validate() const {
  if (hs.rows() == 0 || hs.cols() == 0) throw std::invalid_argument("CrChannels: empty main channel");
  if (!all_finite(hs)) throw std::invalid_argument("CrChannels: non-finite main channel");
  if (!(power > 0.0) || !std::isfinite(power)) throw std::invalid_argument("CrChannels: power must be positive");
  for (const auto& g : pu_channels) {
    if (g.rows() != hs.rows() || g.cols() == 0) {
      throw std::invalid_argument("CrChannels: PU channel dimension does not match transmit antennas");
    }
    if (!all_finite(g)) throw std::invalid_argument("CrChannels: non-finite PU channel");
  }
}

void CrProblem::validate() const {
  channels.validate();
  if (static_cast<std::size_t>(it_limits.size()) != channels.pu_channels.size()) {
    throw std::invalid_argument("CrProblem: one IT limit per PU channel required");
  }
  for (Eigen::Index i = 0; i < it_limits.size(); ++i) {
    if (!(it_limits(i) >= 0.0)) throw std::invalid_argument("CrProblem: IT limits must be non-negative");
  }
}

double received_power(const ComplexMatrix& g, const ComplexMatrix& s) {
  return (g.adjoint() * s * g).trace().real();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Problem after dropping vacuous constraints and eliminating zero limits by projection.
struct Reduced {
  ComplexMatrix hs;
  std::vector<ComplexMatrix> grams;  // G_i G_i^H restricted to the kept subspace
  std::vector<double> limits;
  std::vector<std::size_t> origin;  // index into the caller's constraint list
  std::vector<std::size_t> zeroed;  // constraints with limit treated as 0
  ComplexMatrix projector;
  bool projected = false;
  double power = 0.0;
};

Reduced reduce(const CrProblem& p) {
  const auto& ch = p.channels;
  const Eigen::Index n = ch.tx_antennas();
  Reduced r;
  r.power = ch.power;

  std::vector<std::size_t> zero_set;
  for (std::size_t i = 0; i < ch.pu_channels.size(); ++i) {
    const ComplexMatrix& g = ch.pu_channels[i];
    const double gain = g.squaredNorm();
    const double limit = p.it_limits(static_cast<Eigen::Index>(i));
    if (gain == 0.0 || std::isinf(limit)) continue;
    if (limit <= 1e-12 * (1.0 + ch.power * gain)) zero_set.push_back(i);
  }
  if (!zero_set.empty()) {
    Eigen::Index cols = 0;
    for (auto i : zero_set) cols += ch.pu_channels[i].cols();
    ComplexMatrix stacked(n, cols);
    Eigen::Index c = 0;
    for (auto i : zero_set) {
      stacked.middleCols(c, ch.pu_channels[i].cols()) = ch.pu_channels[i];
      c += ch.pu_channels[i].cols();
    }
    r.projector = complement_projector(stacked);
    r.projected = true;
    r.zeroed = zero_set;
  }

  r.hs = r.projected ? ComplexMatrix(r.projector * ch.hs) : ch.hs;
  for (std::size_t i = 0; i < ch.pu_channels.size(); ++i) {
    const double limit = p.it_limits(static_cast<Eigen::Index>(i));
    if (std::isinf(limit) || std::find(zero_set.begin(), zero_set.end(), i) != zero_set.end()) continue;
    ComplexMatrix g = r.projected ? ComplexMatrix(r.projector * ch.pu_channels[i]) : ch.pu_channels[i];
    if (g.squaredNorm() <= 1e-24 * (1.0 + ch.pu_channels[i].squaredNorm())) continue;
    r.grams.push_back(hermitian_part(g * g.adjoint()));
    r.limits.push_back(limit);
    r.origin.push_back(i);
  }
  return r;
}

struct LagrangianMax {
  ComplexMatrix s;
  double value = 0.0;    // max_S log det(I + H^H S H) - tr(A S)
  double penalty = 0.0;  // bound on the error introduced by the eigenvalue floor
};

ComplexMatrix dual_matrix(const Reduced& r, const RealVector& y) {
  const Eigen::Index n = r.hs.rows();
  ComplexMatrix a = y(0) * ComplexMatrix::Identity(n, n);
  for (std::size_t i = 0; i < r.grams.size(); ++i) a += y(static_cast<Eigen::Index>(i) + 1) * r.grams[i];
  return a;
}

LagrangianMax maximize_lagrangian(const Reduced& r, const RealVector& y) {
  const Eigen::Index n = r.hs.rows();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> dual_eig(dual_matrix(r, y));
  RealVector a = dual_eig.eigenvalues();
  // A >= lambda I exactly; clamping there only removes rounding. The relative floor
  // (paid for through the penalty) matters only when lambda is negligible.
  a = a.cwiseMax(y(0));
  const double floor = std::min(1e-10 * (1.0 + std::max(0.0, a(n - 1))), std::max(y(0), 1e-14 * (1.0 + a(n - 1))));
  RealVector inv_sqrt(n);
  for (Eigen::Index k = 0; k < n; ++k) inv_sqrt(k) = 1.0 / std::sqrt(std::max(a(k), floor));
  const ComplexMatrix& q = dual_eig.eigenvectors();
  // Whitened channel in the eigenbasis of A.
  const ComplexMatrix he = inv_sqrt.asDiagonal() * (q.adjoint() * r.hs);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> gain_eig(he * he.adjoint());
  const RealVector& gains = gain_eig.eigenvalues();
  LagrangianMax out;
  ComplexMatrix v(n, n);
  Eigen::Index used = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s2 = gains(k);
    if (s2 <= 1.0) continue;
    v.col(used++) = std::sqrt(1.0 - 1.0 / s2) * gain_eig.eigenvectors().col(k);
    out.value += std::log(s2) - 1.0 + 1.0 / s2;
  }
  const ComplexMatrix b = q * inv_sqrt.asDiagonal() * v.leftCols(used);
  out.s = hermitian_part(b * b.adjoint());
  if (a(0) < floor) out.penalty = (floor - a(0)) * r.power;
  return out;
}

// log det(I + H^H S H) by Cholesky; S is PSD so the argument is positive definite.
double fast_logdet(const ComplexMatrix& h, const ComplexMatrix& s) {
  ComplexMatrix x = h.adjoint() * s * h;
  x.diagonal().array() += 1.0;
  Eigen::LLT<ComplexMatrix> llt(x);
  if (llt.info() != Eigen::Success) return logdet_capacity(h, s);
  double out = 0.0;
  for (Eigen::Index k = 0; k < x.rows(); ++k) out += 2.0 * std::log(llt.matrixL()(k, k).real());
  return out;
}

double stationarity_residual(const Reduced& r, const ComplexMatrix& s, const RealVector& y) {
  const EigDecomposition es = eigh(hermitian_part(s));
  const double top = std::max(es.values.size() ? es.values(0) : 0.0, 0.0);
  if (top <= 0.0) return 0.0;
  Eigen::Index rank = 0;
  while (rank < es.values.size() && es.values(rank) > 1e-8 * top) ++rank;
  ComplexMatrix x = r.hs.adjoint() * s * r.hs;
  x.diagonal().array() += 1.0;
  const ComplexMatrix grad = r.hs * x.inverse() * r.hs.adjoint();
  const ComplexMatrix v = es.vectors.leftCols(rank);
  return (v.adjoint() * (grad - dual_matrix(r, y)) * v).norm();
}

CrSolution trivial_solution(const CrProblem& p, const Reduced& r) {
  const Eigen::Index n = p.channels.tx_antennas();
  CrSolution sol;
  sol.covariance = ComplexMatrix::Zero(n, n);
  sol.dual.mu = RealVector::Zero(static_cast<Eigen::Index>(p.channels.pu_channels.size()));
  for (auto i : r.zeroed) sol.dual.mu(static_cast<Eigen::Index>(i)) = kInf;
  return sol;
}

struct DualPoint {
  RealVector y;
  double dual = kInf;  // valid upper bound on the optimum
  RealVector slack;    // gradient of the dual function
};

// Dual function evaluations with running best dual and best primal.
class DualTracker {
 public:
  explicit DualTracker(const Reduced& r) : r_(r) {
    const Eigen::Index n = r.hs.rows();
    best_s_ = ComplexMatrix::Zero(n, n);
    for (const auto& gram : r.grams) {
      const EigDecomposition e = eigh(gram);
      Eigen::Index rank = 0;
      while (rank < e.values.size() && e.values(rank) > 1e-12 * e.values(0)) ++rank;
      const ComplexMatrix v = e.vectors.leftCols(rank);
      ranges_.push_back(v * v.adjoint());
    }
  }

  DualPoint evaluate(const RealVector& y) {
    ++evaluations_;
    const LagrangianMax inner = maximize_lagrangian(r_, y);
    DualPoint pt;
    pt.y = y;
    pt.slack.resize(y.size());
    const double trace = inner.s.trace().real();
    pt.slack(0) = r_.power - trace;
    pt.dual = inner.value + inner.penalty + y(0) * r_.power;
    double scale = trace > r_.power ? r_.power / trace : 1.0;
    for (std::size_t i = 0; i < r_.grams.size(); ++i) {
      const auto j = static_cast<Eigen::Index>(i) + 1;
      const double leak = (r_.grams[i] * inner.s).trace().real();
      pt.slack(j) = r_.limits[i] - leak;
      pt.dual += y(j) * r_.limits[i];
      if (leak > r_.limits[i]) scale = std::min(scale, r_.limits[i] / leak);
    }
    if (pt.dual < best_dual_) {
      best_dual_ = pt.dual;
      best_y_ = y;
    }
    // Cheap screen before the log-det: the scaled point cannot beat the incumbent
    // when the dual value itself does not.
    if (pt.dual > best_primal_) {
      consider(scale * inner.s);
      if (scale < 1.0) consider(shrink(inner.s));
    }
    return pt;
  }

  bool converged(double tol) const { return best_dual_ - best_primal_ <= tol; }
  double best_dual() const { return best_dual_; }
  double best_primal() const { return best_primal_; }
  const RealVector& best_y() const { return best_y_; }
  const ComplexMatrix& best_s() const { return best_s_; }
  int evaluations() const { return evaluations_; }

 private:
  void consider(const ComplexMatrix& candidate) {
    const double primal = fast_logdet(r_.hs, candidate);
    if (primal > best_primal_) {
      best_primal_ = primal;
      best_s_ = candidate;
    }
  }

  // Feasible point that shrinks S only on the range of each violated constraint,
  // S <- T S T with T = I - (1 - s) P_i, then scales uniformly for what is left.
  ComplexMatrix shrink(ComplexMatrix s) const {
    const Eigen::Index n = s.rows();
    for (int pass = 0; pass < 3; ++pass) {
      bool changed = false;
      for (std::size_t i = 0; i < r_.grams.size(); ++i) {
        const double leak = (r_.grams[i] * s).trace().real();
        if (leak <= r_.limits[i]) continue;
        const double f = std::sqrt(r_.limits[i] / leak);
        const ComplexMatrix t = ComplexMatrix::Identity(n, n) - (1.0 - f) * ranges_[i];
        s = hermitian_part(t * s * t);
        changed = true;
      }
      if (!changed) break;
    }
    double scale = 1.0;
    const double trace = s.trace().real();
    if (trace > r_.power) scale = r_.power / trace;
    for (std::size_t i = 0; i < r_.grams.size(); ++i) {
      const double leak = (r_.grams[i] * s).trace().real();
      if (leak > r_.limits[i]) scale = std::min(scale, r_.limits[i] / leak);
    }
    return scale * s;
  }

  const Reduced& r_;
  std::vector<ComplexMatrix> ranges_;
  double best_dual_ = kInf;
  double best_primal_ = -kInf;
  RealVector best_y_;
  ComplexMatrix best_s_;
  int evaluations_ = 0;
};

// Multiplier of the power constraint for plain water-filling over the main channel.
double waterfill_level(const RealVector& gains, double power) {
  double lo = 0.0;
  double hi = 0.0;
  for (Eigen::Index k = 0; k < gains.size(); ++k) hi = std::max(hi, gains(k));
  if (hi <= 0.0) return 0.0;
  // Sum_k (1/lambda - 1/g_k)^+ = P, monotone decreasing in lambda.
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    double used = 0.0;
    for (Eigen::Index k = 0; k < gains.size(); ++k) {
      if (gains(k) > mid) used += 1.0 / mid - 1.0 / gains(k);
    }
    (used > power ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Damped projected Newton on the dual with a forward-difference Hessian.
// Returns the number of Newton steps taken.
int newton_phase(DualTracker& tracker, RealVector y, const RealVector& upper, const RealVector& scale,
                 const CrOptions& options) {
  const Eigen::Index dim = y.size();
  y = y.cwiseMax(0.0);
  DualPoint pt = tracker.evaluate(y);
  int steps = 0;
  while (steps < options.newton_iterations && !tracker.converged(options.tol)) {
    ++steps;
    // Variables pinned at zero with the gradient pushing outward stay fixed.
    std::vector<Eigen::Index> free;
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (!(pt.y(j) <= 0.0 && pt.slack(j) > 0.0)) free.push_back(j);
    }
    if (free.empty()) break;
    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd hess(nf, nf);
    RealVector grad(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      const Eigen::Index j = free[static_cast<std::size_t>(a)];
      grad(a) = pt.slack(j);
      const double h = 1e-7 * std::max(pt.y(j), scale(j));
      RealVector probe = pt.y;
      probe(j) += h;
      const DualPoint moved = tracker.evaluate(probe);
      for (Eigen::Index b = 0; b < nf; ++b) {
        hess(b, a) = (moved.slack(free[static_cast<std::size_t>(b)]) - pt.slack(free[static_cast<std::size_t>(b)])) / h;
      }
    }
    if (tracker.converged(options.tol)) break;
    hess = 0.5 * (hess + hess.transpose());
    const double reg = 1e-10 * std::max(hess.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    hess.diagonal().array() += reg;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    RealVector step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite() || step.dot(grad) <= 0.0) {
      // Scaled gradient direction.
      for (Eigen::Index a = 0; a < nf; ++a) step(a) = grad(a) / std::max(std::abs(hess(a, a)), reg);
    }

    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      RealVector trial = pt.y;
      for (Eigen::Index a = 0; a < nf; ++a) {
        const Eigen::Index j = free[static_cast<std::size_t>(a)];
        trial(j) = std::clamp(trial(j) - alpha * step(a), 0.0, upper(j));
      }
      const DualPoint next = tracker.evaluate(trial);
      // The dual gradient is the slack vector.
      if (next.dual <= pt.dual + 1e-4 * pt.slack.dot(trial - pt.y) || tracker.converged(options.tol)) {
        pt = next;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return steps;
}

}  // namespace

CrSolution solve_pa(const CrProblem& problem, const CrOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0)) throw std::invalid_argument("solve_pa: tol must be positive");
  const Reduced r = reduce(problem);
  const double power = r.power;

  // Upper bound on the optimum: log det(I + P Hs^H Hs).
  const RealVector main_gains = eigvalsh(hermitian_part(r.hs.adjoint() * r.hs));
  double cap_bound = 0.0;
  for (Eigen::Index k = 0; k < main_gains.size(); ++k) cap_bound += std::log1p(power * std::max(0.0, main_gains(k)));
  if (cap_bound <= 1e-300) return trivial_solution(problem, r);

  // At a dual optimum lambda * P + sum mu_i Gamma_i <= optimum <= cap_bound.
  const auto dim = static_cast<Eigen::Index>(1 + r.grams.size());
  RealVector upper(dim);
  upper(0) = cap_bound / power;
  for (std::size_t i = 0; i < r.limits.size(); ++i) upper(static_cast<Eigen::Index>(i) + 1) = cap_bound / r.limits[i];
  upper *= 1.0 + 1e-9;

  DualTracker tracker(r);
  int iter = 0;
  if (options.newton_iterations > 0) {
    RealVector start = RealVector::Zero(dim);
    if (options.warm_start && options.warm_start->mu.size() == problem.it_limits.size()) {
      start(0) = options.warm_start->lambda;
      for (std::size_t i = 0; i < r.origin.size(); ++i) {
        const double mu = options.warm_start->mu(static_cast<Eigen::Index>(r.origin[i]));
        start(static_cast<Eigen::Index>(i) + 1) = std::isfinite(mu) ? mu : 0.0;
      }
    } else {
      start(0) = waterfill_level(main_gains, power);
    }
    if (!start.allFinite()) start = RealVector::Zero(dim);
    start = start.cwiseMin(upper);
    // Difference steps follow the natural multiplier size, not the (possibly huge) box.
    RealVector scale(dim);
    scale(0) = 1e-3 * upper(0);
    for (std::size_t i = 0; i < r.grams.size(); ++i) {
      const double gain = std::max(r.grams[i].trace().real(), 1e-300);
      scale(static_cast<Eigen::Index>(i) + 1) = 1e-3 * std::min(upper(static_cast<Eigen::Index>(i) + 1), cap_bound / (power * gain));
    }
    iter += newton_phase(tracker, start, upper, scale, options);
  }

  bool converged = tracker.converged(options.tol);
  if (!converged) {
    Ellipsoid region(0.5 * upper, 0.5 * upper);
    for (int k = 0; k < options.max_iterations; ++k) {
      ++iter;
      const RealVector y = region.center();
      Eigen::Index negative = -1;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (y(j) < 0.0 && (negative < 0 || y(j) < y(negative))) negative = j;
      }
      if (negative >= 0) {
        RealVector g = RealVector::Zero(dim);
        g(negative) = -1.0;
        if (!region.cut(g, -y(negative))) break;
        continue;
      }
      const DualPoint pt = tracker.evaluate(y);
      if (tracker.converged(options.tol)) {
        converged = true;
        break;
      }
      if (!region.cut(pt.slack, pt.dual - tracker.best_dual())) break;
    }
  }

  const RealVector best_y = tracker.best_y().size() == dim ? tracker.best_y() : RealVector(0.5 * upper);
  CrSolution sol = trivial_solution(problem, r);
  const ComplexMatrix& best_s = tracker.best_s();
  sol.covariance = r.projected ? hermitian_part(r.projector * best_s * r.projector) : best_s;
  sol.capacity = logdet_capacity(problem.channels.hs, sol.covariance);
  sol.dual_value = std::max(tracker.best_dual(), sol.capacity);
  sol.dual.lambda = best_y(0);
  for (std::size_t i = 0; i < r.origin.size(); ++i) {
    sol.dual.mu(static_cast<Eigen::Index>(r.origin[i])) = best_y(static_cast<Eigen::Index>(i) + 1);
  }
  sol.kkt_residual = stationarity_residual(r, best_s, best_y);
  sol.iterations = iter;
  sol.dual_evaluations = tracker.evaluations();
  sol.status = converged || tracker.converged(options.tol) ? SolveStatus::Converged : SolveStatus::MaxIterations;
  return sol;
}

double GEvaluation::value() const { return std::exp(log_g); }

RealVector GEvaluation::gradient() const { return mu * value(); }

GEvaluation evaluate_g(const CrChannels& channels, const RealVector& limits, const CrOptions& options) {
  CrProblem p{channels, limits};
  GEvaluation out;
  out.solution = solve_pa(p, options);
  out.log_g = out.solution.capacity;
  out.log_g_upper = out.solution.dual_value;
  out.mu = out.solution.dual.mu;
  return out;
}

double eval_g(const CrChannels& channels, const RealVector& limits, const CrOptions& options) {
  return evaluate_g(channels, limits, options).value();
}

RealVector grad_g(const CrChannels& channels, const RealVector& limits, const CrOptions& options) {
  return evaluate_g(channels, limits, options).gradient();
}

}  // namespace secrecy
