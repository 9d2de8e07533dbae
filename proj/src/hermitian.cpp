#include "secrecy/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace secrecy {

bool all_finite(const ComplexMatrix& a) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const cplx z = a.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  if (!all_finite(a)) return false;
  const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const double tol = rel_tol * (1.0 + scale);
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    for (Eigen::Index k = j; k < a.cols(); ++k) {
      if (std::abs(a(j, k) - std::conj(a(k, j))) > tol) return false;
    }
  }
  return true;
}

bool is_psd(const ComplexMatrix& a, double rel_tol) {
  if (!is_hermitian(a, 1e-9)) return false;
  if (a.size() == 0) return true;
  const RealVector ev = eigvalsh(hermitian_part(a));
  const double tr = std::abs(a.trace().real());
  return ev.minCoeff() >= -rel_tol * (1.0 + tr);
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

namespace {

void require_hermitian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigh: matrix is not square");
  if (!is_hermitian(a)) throw std::invalid_argument("eigh: matrix is not Hermitian");
}

}  // namespace

EigDecomposition eigh(const ComplexMatrix& a) {
  require_hermitian(a);
  const Eigen::Index n = a.rows();
  EigDecomposition out;
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  // Eigen sorts ascending.
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

RealVector eigvalsh(const ComplexMatrix& a) {
  require_hermitian(a);
  if (a.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

double logdet_capacity(const ComplexMatrix& h, const ComplexMatrix& s) {
  if (s.rows() != s.cols() || h.rows() != s.rows()) {
    throw std::invalid_argument("logdet_capacity: dimension mismatch");
  }
  if (h.cols() == 0) return 0.0;
  ComplexMatrix x = h.adjoint() * s * h;
  x = hermitian_part(x);
  x.diagonal().array() += 1.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(x, Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    acc += std::log(std::max(solver.eigenvalues()(k), 1e-300));
  }
  return acc;
}

double default_whitening_floor(const RealVector& eigenvalues) {
  const double top = eigenvalues.size() == 0 ? 0.0 : std::max(0.0, eigenvalues.maxCoeff());
  return 1e-10 * (1.0 + top);
}

ComplexMatrix whiten_inv_sqrt(const ComplexMatrix& a, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("whiten_inv_sqrt: floor must be positive");
  const EigDecomposition e = eigh(a);
  RealVector d(e.values.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) d(k) = 1.0 / std::sqrt(std::max(e.values(k), floor));
  return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

RealVector penalized_waterfill(const RealVector& gains) {
  RealVector p(gains.size());
  for (Eigen::Index k = 0; k < gains.size(); ++k) {
    if (!(gains(k) >= 0.0) || !std::isfinite(gains(k))) {
      throw std::invalid_argument("penalized_waterfill: gains must be finite and non-negative");
    }
    p(k) = gains(k) > 1.0 ? 1.0 - 1.0 / gains(k) : 0.0;
  }
  return p;
}

RealVector project_capped_simplex(const RealVector& x, double budget) {
  RealVector clamped = x.cwiseMax(0.0);
  if (clamped.sum() <= budget) return clamped;
  // Projection onto {x >= 0, sum x = budget}: shift by the threshold theta.
  std::vector<double> sorted(x.data(), x.data() + x.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - budget) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  return (x.array() - theta).cwiseMax(0.0).matrix();
}

ComplexMatrix project_psd(const ComplexMatrix& a) {
  const EigDecomposition e = eigh(hermitian_part(a));
  return e.vectors * e.values.cwiseMax(0.0).asDiagonal() * e.vectors.adjoint();
}

ComplexMatrix project_spectraplex(const ComplexMatrix& a, double budget) {
  const EigDecomposition e = eigh(hermitian_part(a));
  const RealVector p = project_capped_simplex(e.values, budget);
  return e.vectors * p.asDiagonal() * e.vectors.adjoint();
}

ComplexMatrix complement_projector(const ComplexMatrix& columns, double rel_tol) {
  const Eigen::Index n = columns.rows();
  ComplexMatrix proj = ComplexMatrix::Identity(n, n);
  if (columns.cols() == 0 || columns.norm() == 0.0) return proj;
  const EigDecomposition e = eigh(hermitian_part(columns * columns.adjoint()));
  const double cutoff = rel_tol * std::max(e.values(0), 0.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (e.values(k) > cutoff) proj -= e.vectors.col(k) * e.vectors.col(k).adjoint();
  }
  return proj;
}

}  // namespace secrecy
