#include "secrecy/level_search.hpp"

#include "secrecy/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>

namespace secrecy {

double Denominator::value(double gamma) const { return std::exp(log_value(gamma)); }

double Denominator::log_value(double gamma) const { return power * std::log1p(std::max(0.0, gamma) / scale); }

double Denominator::derivative(double gamma) const {
  return (power / scale) * std::pow(1.0 + std::max(0.0, gamma) / scale, power - 1.0);
}

double Denominator::inverse(double v) const {
  if (!(v > 1.0)) return 0.0;
  return scale * std::expm1(std::log(v) / power);
}

LevelProblem::LevelProblem(CrChannels ch, std::vector<Denominator> dens, const CrOptions& pa)
    : channels(std::move(ch)), denominators(std::move(dens)) {
  channels.validate();
  if (denominators.size() != channels.pu_channels.size()) {
    throw std::invalid_argument("LevelProblem: one denominator per constraint required");
  }
  if (denominators.empty()) throw std::invalid_argument("LevelProblem: at least one constraint required");
  for (const auto& d : denominators) {
    if (!(d.scale > 0.0) || !(d.power >= 1.0)) throw std::invalid_argument("LevelProblem: invalid denominator");
  }
  const auto k = static_cast<Eigen::Index>(size());
  gamma_cap.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const ComplexMatrix& g = channels.pu_channels[static_cast<std::size_t>(i)];
    const RealVector ev = eigvalsh(hermitian_part(g.adjoint() * g));
    gamma_cap(i) = channels.power * std::max(0.0, ev(0));
  }
  const GEvaluation top = evaluate_g(channels, RealVector::Constant(k, std::numeric_limits<double>::infinity()), pa);
  log_g_inf = top.log_g_upper;
  unconstrained = top.solution.covariance;
}

LevelProblem LevelProblem::from_secrecy(const SecrecyProblem& p, const CrOptions& pa) {
  p.validate();
  if (p.mode != AntennaMode::SingleAntenna) {
    throw std::invalid_argument("LevelProblem: single-antenna eavesdroppers required");
  }
  std::vector<Denominator> dens;
  for (std::size_t i = 0; i < p.eavesdropper_count(); ++i) dens.push_back({p.sigma2(i), 1.0});
  return LevelProblem(cr_channels(p), std::move(dens), pa);
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Feasible: return "feasible";
    case Verdict::Infeasible: return "infeasible";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

double log_objective(const LevelProblem& p, const GEvaluation& g, const RealVector& gamma) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    worst = std::max(worst, p.denominators[i].log_value(gamma(static_cast<Eigen::Index>(i))));
  }
  return g.log_g - worst;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Bounds stay valid for any dual point; only a gap this wide is worth reporting.
constexpr double kGapAlarm = 1e-6;

// One evaluation of phi_nu(Gamma) = g(Gamma)/t - sum_i nu_i d_i(Gamma_i).
struct Probe {
  RealVector gamma;
  GEvaluation g;
  double ratio = 0.0;     // attained g / t
  RealVector slack;       // g/t - d_i(Gamma_i), attained g
  double phi = 0.0;       // lower estimate of phi_nu
  RealVector grad;        // gradient of phi_nu
  double upper = kInf;    // upper bound on max over the box of phi_nu
};

class LevelContext {
 public:
  LevelContext(const LevelProblem& p, double log_t, const LevelOptions& options, LevelState& state)
      : p_(p), log_t_(log_t), options_(options), state_(state) {
    const auto k = static_cast<Eigen::Index>(p.size());
    box_.resize(k);
    // Any feasible Gamma can be clipped into this box without losing feasibility.
    const double ceiling = std::exp(p.log_g_inf - log_t) * (1.0 + 1e-9);
    for (Eigen::Index i = 0; i < k; ++i) {
      box_(i) = std::min(p.gamma_cap(i), p.denominators[static_cast<std::size_t>(i)].inverse(ceiling));
    }
    floor_ = (1e-10 * (1.0 + p.gamma_cap.array())).matrix().cwiseMin(box_);
  }

  const RealVector& box() const { return box_; }
  int solves() const { return solves_; }
  bool failures() const { return failures_; }

  Probe probe(const RealVector& gamma, const RealVector& nu) {
    Probe out;
    // Strictly positive limits keep the multipliers finite.
    out.gamma = gamma.cwiseMax(floor_).cwiseMin(box_);
    CrOptions pa = options_.pa;
    pa.warm_start = state_.dual;
    out.g = evaluate_g(p_.channels, out.gamma, pa);
    ++solves_;
    if (out.g.log_g_upper - out.g.log_g > kGapAlarm) failures_ = true;
    state_.dual = out.g.solution.dual;
    for (Eigen::Index i = 0; i < state_.dual->mu.size(); ++i) {
      if (!std::isfinite(state_.dual->mu(i))) state_.dual->mu(i) = 0.0;
    }
    rescore(out, nu);
    return out;
  }

  void rescore(Probe& out, const RealVector& nu) const {
    const auto k = static_cast<Eigen::Index>(p_.size());
    out.ratio = std::exp(out.g.log_g - log_t_);
    const double ratio_hi = std::exp(out.g.log_g_upper - log_t_);
    out.slack.resize(k);
    out.grad.resize(k);
    out.phi = out.ratio;
    out.upper = ratio_hi;
    for (Eigen::Index i = 0; i < k; ++i) {
      const Denominator& d = p_.denominators[static_cast<std::size_t>(i)];
      const double x = out.gamma(i);
      const double dv = d.value(x);
      out.slack(i) = out.ratio - dv;
      out.phi -= nu(i) * dv;
      const double mu = out.g.mu(i);
      if (!std::isfinite(mu)) {
        out.grad(i) = 0.0;
        out.upper = kInf;
        continue;
      }
      const double a = mu * ratio_hi;
      out.grad(i) = mu * out.ratio - nu(i) * d.derivative(x);
      // Tangent bound of the concave g, maximized coordinatewise against -nu_i d_i.
      if (std::isfinite(out.upper)) out.upper += best_coordinate(d, a, nu(i), box_(i)) - a * x;
    }
  }

  bool is_witness(const Probe& pr) const { return pr.slack.minCoeff() >= -options_.witness_tol; }

 private:
  // max over x in [0, cap] of a x - nu d(x).
  static double best_coordinate(const Denominator& d, double a, double nu, double cap) {
    double x = 0.0;
    if (nu <= 0.0) {
      x = a > 0.0 ? cap : 0.0;
    } else if (d.power == 1.0) {
      x = a > nu / d.scale ? cap : 0.0;
    } else {
      const double base = a * d.scale / (nu * d.power);
      x = base > 1.0 ? d.scale * (std::pow(base, 1.0 / (d.power - 1.0)) - 1.0) : 0.0;
      x = std::clamp(x, 0.0, cap);
    }
    return a * x - nu * d.value(x);
  }

  const LevelProblem& p_;
  double log_t_;
  const LevelOptions& options_;
  LevelState& state_;
  RealVector box_;
  RealVector floor_;
  int solves_ = 0;
  bool failures_ = false;
};

// Hint: the tangent estimate of f0(nu) is negative. With a non-concave g this is
// not a proof, so the caller verifies it.
enum class InnerResult { Witness, Hint, Done };

// Projected gradient ascent on phi_nu with Barzilai-Borwein steps and a
// non-monotone backtracking safeguard. `best` holds the highest phi found;
// `bound` the lowest upper bound.
InnerResult maximize_phi(LevelContext& ctx, const RealVector& nu, RealVector start, const LevelOptions& options,
                         Probe& best, double& bound, Probe& witness) {
  const RealVector& box = ctx.box();
  Probe cur = ctx.probe(start, nu);
  best = cur;
  bound = cur.upper;
  if (ctx.is_witness(cur)) {
    witness = cur;
    return InnerResult::Witness;
  }
  if (bound < -options.certificate_tol) return InnerResult::Hint;

  const double box_scale = std::max(box.maxCoeff(), 1e-300);
  double step = 0.0;
  {
    const double gnorm = cur.grad.cwiseAbs().maxCoeff();
    step = gnorm > 0.0 ? 0.25 * box_scale / gnorm : box_scale;
  }
  std::deque<double> recent{cur.phi};
  for (int it = 0; it < options.inner_iterations; ++it) {
    const double gap_tol = 1e-9 * (1.0 + std::abs(best.ratio));
    if (bound - best.phi <= gap_tol) return InnerResult::Done;

    const RealVector target = (cur.gamma + step * cur.grad).cwiseMax(0.0).cwiseMin(box);
    const RealVector dir = target - cur.gamma;
    if (dir.cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + box_scale)) return InnerResult::Done;
    const double reference = *std::min_element(recent.begin(), recent.end());
    double scale = 1.0;
    Probe next;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, scale *= 0.5) {
      next = ctx.probe(cur.gamma + scale * dir, nu);
      bound = std::min(bound, next.upper);
      if (next.phi > best.phi) best = next;
      if (ctx.is_witness(next)) {
        witness = next;
        return InnerResult::Witness;
      }
      if (bound < -options.certificate_tol) return InnerResult::Hint;
      if (next.phi >= reference + 1e-4 * scale * cur.grad.dot(dir) - 1e-13 * (1.0 + std::abs(reference))) {
        accepted = true;
        break;
      }
    }
    if (!accepted) return InnerResult::Done;
    const RealVector s = next.gamma - cur.gamma;
    const RealVector y = next.grad - cur.grad;
    const double sy = s.dot(y);
    const double ss = s.squaredNorm();
    step = sy < 0.0 ? ss / -sy : 4.0 * step;
    step = std::clamp(step, 1e-12 * box_scale, 1e12 * box_scale);
    cur = next;
    recent.push_back(cur.phi);
    if (recent.size() > 5) recent.pop_front();
  }
  return InnerResult::Done;
}

FeasibilityOutcome settle(const LevelProblem& p, double log_t, const LevelOptions& options, LevelState& state) {
  const auto k = static_cast<Eigen::Index>(p.size());
  LevelContext ctx(p, log_t, options, state);
  FeasibilityOutcome out;
  out.f0_value = kInf;

  auto finish_witness = [&](const Probe& w) {
    out.verdict = Verdict::Feasible;
    out.witness = w.gamma;
    out.witness_log_f = log_objective(p, w.g, w.gamma);
    out.covariance = w.g.solution.covariance;
    out.pa_dual = w.g.solution.dual;
    state.gamma = w.gamma;
  };

  RealVector gamma = state.gamma.size() == k ? state.gamma : RealVector(0.5 * ctx.box());
  RealVector nu = state.nu.size() == k ? state.nu : RealVector::Constant(k, 1.0 / static_cast<double>(k));

  // Simplex coordinates: nu_1..nu_{K-1}, nu_K = 1 - sum.
  const Eigen::Index dim = std::max<Eigen::Index>(k - 1, 1);
  std::optional<Ellipsoid> region;
  if (k > 1) {
    // Half-width 1 around any simplex point covers the whole simplex.
    region.emplace(RealVector(nu.head(dim)), RealVector::Constant(dim, 1.0));
  }
  int outer = 0;
  while (true) {
    Probe best;
    Probe witness;
    double bound = kInf;
    const InnerResult res = maximize_phi(ctx, nu, gamma, options, best, bound, witness);
    out.f0_value = std::min(out.f0_value, bound);
    if (res == InnerResult::Witness) {
      finish_witness(witness);
      state.nu = nu;
      break;
    }
    if (res == InnerResult::Hint) {
      state.gamma = best.gamma;
      break;
    }
    gamma = best.gamma;
    if (k == 1 || ++outer >= options.outer_iterations) break;

    // Cut on nu with the subgradient of f0 in simplex coordinates: slack_j - slack_K.
    RealVector sub(dim);
    for (Eigen::Index j = 0; j < dim; ++j) sub(j) = best.slack(j) - best.slack(k - 1);
    bool ok = region->cut(sub, 0.0);
    RealVector c = region->center();
    // Keep the center in the simplex with feasibility cuts.
    for (int guard = 0; ok && guard < 200; ++guard) {
      Eigen::Index neg = -1;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (c(j) < 0.0 && (neg < 0 || c(j) < c(neg))) neg = j;
      }
      if (neg >= 0) {
        RealVector g = RealVector::Zero(dim);
        g(neg) = -1.0;
        ok = region->cut(g, -c(neg));
      } else if (c.sum() > 1.0) {
        ok = region->cut(RealVector::Ones(dim), c.sum() - 1.0);
      } else {
        break;
      }
      c = region->center();
    }
    if (!ok) break;
    nu.head(dim) = c;
    nu(k - 1) = std::max(0.0, 1.0 - c.sum());
  }
  if (out.verdict == Verdict::Indeterminate) {
    out.nu = nu;
    state.nu = nu;
    if (state.gamma.size() != k) state.gamma = gamma;
  }
  out.pa_solves = ctx.solves();
  out.pa_failures = ctx.failures();
  return out;
}

}  // namespace

struct BoxTree {
  struct Leaf {
    RealVector lo;
    RealVector hi;
    double log_g = 0.0;     // attained at hi
    double log_g_up = 0.0;  // dual bound at hi
    DualCertificate dual;   // its multipliers give log g <= log_g_up - mu.(hi - Gamma)
    bool tangent = true;    // false when a multiplier was infinite
  };
  RealVector extent;
  double floor_log_t = 0.0;  // valid for levels at or above this one
  std::vector<Leaf> leaves;
};

namespace {

enum class TreeResult { Certified, Witness, Refuted, Exhausted };

class TreeSearch {
 public:
  TreeSearch(const LevelProblem& p, BoxTree& tree, double log_t, const LevelOptions& options)
      : p_(p), tree_(tree), log_t_(log_t), options_(options) {}

  int solves() const { return solves_; }
  bool failures() const { return failures_; }
  const RealVector& witness() const { return witness_; }
  double bound() const { return bound_; }

  static BoxTree::Leaf make_leaf(const LevelProblem& p, RealVector lo, RealVector hi, const LevelOptions& options,
                                 const std::optional<DualCertificate>& warm, bool& failed) {
    BoxTree::Leaf leaf;
    leaf.lo = std::move(lo);
    leaf.hi = std::move(hi);
    CrOptions pa = options.pa;
    pa.warm_start = warm;
    const GEvaluation g = evaluate_g(p.channels, leaf.hi, pa);
    if (g.log_g_upper - g.log_g > kGapAlarm) failed = true;
    leaf.log_g = g.log_g;
    leaf.log_g_up = g.log_g_upper;
    leaf.dual = g.solution.dual;
    for (Eigen::Index i = 0; i < leaf.dual.mu.size(); ++i) {
      if (!std::isfinite(leaf.dual.mu(i))) {
        leaf.dual.mu(i) = 0.0;
        leaf.tangent = false;
      }
    }
    return leaf;
  }

  // Upper bound over the leaf of g/t - sum nu_i d_i (weighted) or of
  // min_i g/t - d_i, scaled so that a negative value certifies the leaf.
  double upper(const BoxTree::Leaf& leaf, const RealVector* nu) const {
    const auto k = static_cast<Eigen::Index>(p_.size());
    if (!leaf.tangent) return std::exp(leaf.log_g_up - log_t_) - penalty(leaf.lo, nu);
    const RealVector& mu = leaf.dual.mu;
    if (!nu) {
      // log g(Gamma) <= log_g_up - mu.(hi - Gamma); against each concave log d_i the
      // maximum over the box sits at an endpoint of coordinate i.
      double worst = -kInf;
      for (Eigen::Index i = 0; i < k; ++i) {
        const Denominator& d = p_.denominators[static_cast<std::size_t>(i)];
        const double at_low = mu(i) * (leaf.hi(i) - leaf.lo(i)) + d.log_value(leaf.lo(i));
        worst = std::max(worst, std::min(at_low, d.log_value(leaf.hi(i))));
      }
      return std::expm1(leaf.log_g_up - worst - log_t_);
    }
    bool affine = k <= 10;
    for (const auto& d : p_.denominators) affine = affine && d.power == 1.0;
    if (!affine) return std::exp(leaf.log_g_up - log_t_) - penalty(leaf.lo, nu);
    // exp(tangent) - sum nu_i d_i is convex, so its maximum is at a vertex.
    double best = -kInf;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      double lin = leaf.log_g_up - log_t_;
      double pen = 0.0;
      for (Eigen::Index i = 0; i < k; ++i) {
        const double x = (mask >> i) & 1u ? leaf.hi(i) : leaf.lo(i);
        lin -= mu(i) * (leaf.hi(i) - x);
        pen += (*nu)(i) * p_.denominators[static_cast<std::size_t>(i)].value(x);
      }
      best = std::max(best, std::exp(lin) - pen);
    }
    return best;
  }
  double value(const BoxTree::Leaf& leaf, const RealVector* nu) const {
    const double ratio = std::exp(leaf.log_g - log_t_);
    return ratio - penalty(leaf.hi, nu);
  }

  // Best-first refinement until every leaf bound is below -certificate_tol, a
  // witness appears, or (weighted mode) a point refutes nu.
  TreeResult run(const RealVector* nu) {
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry> heap;
    for (std::size_t i = 0; i < tree_.leaves.size(); ++i) heap.push({upper(tree_.leaves[i], nu), i});
    int splits = 0;
    while (!heap.empty()) {
      const auto [ub, idx] = heap.top();
      if (ub < -options_.certificate_tol) {
        bound_ = ub;
        return TreeResult::Certified;
      }
      heap.pop();
      const BoxTree::Leaf& leaf = tree_.leaves[idx];
      if (value(leaf, nullptr) >= -options_.witness_tol) {
        witness_ = leaf.hi;
        return TreeResult::Witness;
      }
      if (nu && value(leaf, nu) >= 0.0) {
        heap.push({ub, idx});
        bound_ = ub;
        return TreeResult::Refuted;
      }
      if (splits >= options_.max_boxes) {
        heap.push({ub, idx});
        bound_ = ub;
        return TreeResult::Exhausted;
      }
      // Split the relatively widest side at its midpoint.
      Eigen::Index dim = -1;
      double widest = 0.0;
      for (Eigen::Index j = 0; j < leaf.lo.size(); ++j) {
        if (!(tree_.extent(j) > 0.0)) continue;
        const double w = (leaf.hi(j) - leaf.lo(j)) / tree_.extent(j);
        if (w > widest) {
          widest = w;
          dim = j;
        }
      }
      if (dim < 0 || widest < 1e-13) {
        heap.push({ub, idx});
        bound_ = ub;
        return TreeResult::Exhausted;
      }
      ++splits;
      const double mid = 0.5 * (leaf.lo(dim) + leaf.hi(dim));
      RealVector lower_hi = leaf.hi;
      lower_hi(dim) = mid;
      BoxTree::Leaf low = make_leaf(p_, leaf.lo, lower_hi, options_, leaf.dual, failures_);
      ++solves_;
      // The upper half keeps the parent's corner and evaluation.
      tree_.leaves[idx].lo(dim) = mid;
      heap.push({upper(tree_.leaves[idx], nu), idx});
      tree_.leaves.push_back(std::move(low));
      heap.push({upper(tree_.leaves.back(), nu), tree_.leaves.size() - 1});
    }
    bound_ = -kInf;
    return TreeResult::Certified;
  }

 private:
  double penalty(const RealVector& gamma, const RealVector* nu) const {
    double out = nu ? 0.0 : -kInf;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      const double d = p_.denominators[i].value(gamma(static_cast<Eigen::Index>(i)));
      if (nu) {
        out += (*nu)(static_cast<Eigen::Index>(i)) * d;
      } else {
        out = std::max(out, d);
      }
    }
    return out;
  }

  const LevelProblem& p_;
  BoxTree& tree_;
  double log_t_;
  const LevelOptions& options_;
  int solves_ = 0;
  bool failures_ = false;
  RealVector witness_;
  double bound_ = kInf;
};

// Range of Gamma that holds every feasible point (after clipping) for levels >= log_t.
RealVector gamma_extent(const LevelProblem& p, double log_t) {
  const auto k = static_cast<Eigen::Index>(p.size());
  RealVector out(k);
  const double ceiling = std::exp(p.log_g_inf - log_t) * (1.0 + 1e-9);
  for (Eigen::Index i = 0; i < k; ++i) {
    out(i) = std::min(p.gamma_cap(i), p.denominators[static_cast<std::size_t>(i)].inverse(ceiling));
  }
  return out;
}

BoxTree& ensure_tree(const LevelProblem& p, double log_t, const LevelOptions& options, LevelState& state,
                     int& solves, bool& failed) {
  if (!state.tree || state.tree->floor_log_t > log_t) {
    auto tree = std::make_shared<BoxTree>();
    tree->floor_log_t = log_t;
    tree->extent = gamma_extent(p, log_t);
    tree->leaves.push_back(TreeSearch::make_leaf(p, RealVector::Zero(tree->extent.size()), tree->extent, options,
                                                 state.dual, failed));
    ++solves;
    state.tree = std::move(tree);
  }
  return *state.tree;
}

FeasibilityOutcome witness_outcome(const LevelProblem& p, const RealVector& gamma, const LevelOptions& options,
                                   LevelState& state) {
  FeasibilityOutcome out;
  CrOptions pa = options.pa;
  pa.warm_start = state.dual;
  const GEvaluation g = evaluate_g(p.channels, gamma, pa);
  out.verdict = Verdict::Feasible;
  out.witness = gamma;
  out.witness_log_f = log_objective(p, g, gamma);
  out.covariance = g.solution.covariance;
  out.pa_dual = g.solution.dual;
  out.pa_solves = 1;
  state.gamma = gamma;
  return out;
}

FeasibilityOutcome decide(const LevelProblem& p, double log_t, const LevelOptions& options, LevelState& st) {
  const auto k = static_cast<Eigen::Index>(p.size());
  FeasibilityOutcome dual_stage = settle(p, log_t, options, st);
  if (dual_stage.verdict == Verdict::Feasible) return dual_stage;

  int solves = dual_stage.pa_solves;
  bool failed = dual_stage.pa_failures;
  BoxTree& tree = ensure_tree(p, log_t, options, st, solves, failed);
  TreeSearch search(p, tree, log_t, options);
  FeasibilityOutcome out;
  out.nu = dual_stage.nu.size() == k ? dual_stage.nu : RealVector::Constant(k, 1.0 / static_cast<double>(k));

  // A single constraint makes the weighted and max-min bounds identical.
  TreeResult res = search.run(k == 1 ? nullptr : &out.nu);
  if (res == TreeResult::Certified) {
    out.verdict = Verdict::Infeasible;
    out.certificate = CertificateKind::Dual;
    out.f0_value = search.bound();
  } else if (res == TreeResult::Refuted) {
    res = search.run(nullptr);
    if (res == TreeResult::Certified) {
      out.verdict = Verdict::Infeasible;
      out.certificate = CertificateKind::BoxCover;
      out.f0_value = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (res == TreeResult::Witness) {
    const RealVector gamma = search.witness();
    out = witness_outcome(p, gamma, options, st);
  }
  out.boxes = static_cast<int>(tree.leaves.size());
  out.pa_solves += solves + search.solves();
  out.pa_failures = out.pa_failures || failed || search.failures();
  return out;
}

}  // namespace

FeasibilityOutcome check_level(const LevelProblem& p, double log_t, const LevelOptions& options, LevelState* state) {
  if (!std::isfinite(log_t)) throw std::invalid_argument("check_level: level must be finite");
  LevelState local;
  LevelState& st = state ? *state : local;
  // g >= 1, so any t <= 1 is met by Gamma = 0.
  if (log_t <= 0.0) return witness_outcome(p, RealVector::Zero(static_cast<Eigen::Index>(p.size())), options, st);
  if (log_t > p.log_g_inf + 1e-12) {
    // g(Gamma) <= g(inf) < t <= t d_i(Gamma_i) for every Gamma.
    FeasibilityOutcome out;
    out.verdict = Verdict::Infeasible;
    out.certificate = CertificateKind::Dual;
    out.nu = RealVector::Constant(static_cast<Eigen::Index>(p.size()), 1.0 / static_cast<double>(p.size()));
    out.f0_value = std::exp(p.log_g_inf - log_t) - 1.0;
    return out;
  }
  FeasibilityOutcome out = decide(p, log_t, options, st);
  if (out.verdict == Verdict::Indeterminate) {
    LevelOptions tight = options;
    tight.pa.tol = std::max(1e-13, options.pa.tol * 1e-2);
    tight.inner_iterations = 2 * options.inner_iterations;
    tight.outer_iterations = 2 * options.outer_iterations;
    tight.max_boxes = 4 * options.max_boxes;
    const int used = out.pa_solves;
    out = decide(p, log_t, tight, st);
    out.pa_solves += used;
  }
  return out;
}

LevelResult level_search(const LevelProblem& p, const LevelOptions& options) {
  if (!(options.eps_rate > 0.0)) throw std::invalid_argument("level_search: eps must be positive");
  const auto k = static_cast<Eigen::Index>(p.size());
  LevelResult res;

  // Gamma = 0 is always feasible and its level is g(0).
  const GEvaluation g0 = evaluate_g(p.channels, RealVector::Zero(k), options.pa);
  res.pa_solves = 1;
  res.gamma = RealVector::Zero(k);
  res.log_f = g0.log_g;
  res.covariance = g0.solution.covariance;
  LevelState state;
  state.dual = g0.solution.dual;
  for (Eigen::Index i = 0; i < state.dual->mu.size(); ++i) {
    if (!std::isfinite(state.dual->mu(i))) state.dual->mu(i) = 0.0;
  }

  // The unconstrained optimum is a candidate too: Gamma_i = its received powers.
  {
    RealVector gamma(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      gamma(i) = std::max(0.0, received_power(p.channels.pu_channels[static_cast<std::size_t>(i)], p.unconstrained));
    }
    const GEvaluation gs = evaluate_g(p.channels, gamma, options.pa);
    ++res.pa_solves;
    const double lf = log_objective(p, gs, gamma);
    if (lf > res.log_f) {
      res.log_f = lf;
      res.gamma = gamma;
      res.covariance = gs.solution.covariance;
    }
    state.gamma = res.gamma;
  }

  res.log_t_min = res.log_f;
  res.log_t_max = std::max(p.log_g_inf, res.log_t_min);
  {
    // One box tree serves every level above the starting lower bound.
    bool failed = false;
    ensure_tree(p, res.log_t_min, options, state, res.pa_solves, failed);
    if (failed) res.status = SecrecyStatus::PaNotConverged;
  }
  while (res.log_t_max - res.log_t_min > options.eps_rate && res.levels < options.max_levels) {
    ++res.levels;
    const double log_t = 0.5 * (res.log_t_min + res.log_t_max);
    const FeasibilityOutcome fo = check_level(p, log_t, options, &state);
    res.pa_solves += fo.pa_solves;
    if (fo.pa_failures && res.status == SecrecyStatus::Converged) res.status = SecrecyStatus::PaNotConverged;
    if (fo.verdict == Verdict::Feasible) {
      res.log_t_min = std::max(log_t, fo.witness_log_f);
      if (fo.witness_log_f > res.log_f) {
        res.log_f = fo.witness_log_f;
        res.gamma = fo.witness;
        res.covariance = fo.covariance;
      }
    } else if (fo.verdict == Verdict::Infeasible) {
      res.log_t_max = log_t;
    } else {
      res.status = SecrecyStatus::Indeterminate;
      break;
    }
  }
  res.log_t_max = std::max(res.log_t_max, res.log_t_min);
  return res;
}

}  // namespace secrecy
