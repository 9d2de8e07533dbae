#pragma once

// Complex matrix primitives shared by every solver: Hermitian eigendecomposition,
// PSD handling, log-det capacity and water-filling.

#include <Eigen/Dense>

#include <complex>

namespace secrecy {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted in descending order.
struct EigDecomposition {
  RealVector values;
  ComplexMatrix vectors;  // unitary, one eigenvector per column
};

bool all_finite(const ComplexMatrix& a);

/// max |A[j,k] - conj(A[k,j])| <= rel_tol * (1 + max|A|), diagonal imaginary parts included.
bool is_hermitian(const ComplexMatrix& a, double rel_tol = 1e-12);

/// Hermitian and smallest eigenvalue >= -rel_tol * (1 + |trace|).
bool is_psd(const ComplexMatrix& a, double rel_tol = 1e-9);

/// (A + A^H) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& a);

/// Throws std::invalid_argument when `a` is not square or not Hermitian.
EigDecomposition eigh(const ComplexMatrix& a);

/// Eigenvalues only, descending. Same preconditions as eigh.
RealVector eigvalsh(const ComplexMatrix& a);

/// log det(I + H^H S H) in nats, evaluated from the eigenvalues of the Hermitian argument.
/// H is N x M, S is N x N.
double logdet_capacity(const ComplexMatrix& h, const ComplexMatrix& s);

/// Default eigenvalue floor for whitening: 1e-10 * (1 + largest eigenvalue).
double default_whitening_floor(const RealVector& eigenvalues);

/// A_f^{-1/2}, where A_f raises every eigenvalue of A below `floor` up to `floor`.
ComplexMatrix whiten_inv_sqrt(const ComplexMatrix& a, double floor);

/// Maximizer of sum_k log(1 + g_k p_k) - sum_k p_k over p >= 0: p_k = max(0, 1 - 1/g_k).
RealVector penalized_waterfill(const RealVector& gains);

/// Euclidean projection of a real vector onto {x >= 0, sum x <= budget}.
RealVector project_capped_simplex(const RealVector& x, double budget);

/// Frobenius projection onto the PSD cone.
ComplexMatrix project_psd(const ComplexMatrix& a);

/// Frobenius projection onto {S >= 0, tr S <= budget}.
ComplexMatrix project_spectraplex(const ComplexMatrix& a, double budget);

/// Orthogonal projector onto the complement of span(columns). Directions whose
/// eigenvalue in columns*columns^H falls below rel_tol * max are treated as null.
ComplexMatrix complement_projector(const ComplexMatrix& columns, double rel_tol = 1e-10);

}  // namespace secrecy
