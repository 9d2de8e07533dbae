#pragma once

// Seeded random inputs for the unit tests. Independent of the harness generator.

#include "secrecy/hermitian.hpp"

#include <cmath>
#include <random>

namespace testutil {

using secrecy::ComplexMatrix;
using secrecy::ComplexVector;
using secrecy::RealVector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  ComplexMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix a(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double re = normal_(rng_);
        a(r, c) = {re, normal_(rng_)};
      }
    }
    return a;
  }
  ComplexVector vector(Eigen::Index n) { return matrix(n, 1); }

  ComplexMatrix hermitian(Eigen::Index n) {
    const ComplexMatrix a = matrix(n, n);
    return 0.5 * (a + a.adjoint());
  }

  ComplexMatrix unitary(Eigen::Index n) {
    Eigen::HouseholderQR<ComplexMatrix> qr(matrix(n, n));
    return qr.householderQ() * ComplexMatrix::Identity(n, n);
  }

  // Random covariance with trace `budget`.
  ComplexMatrix covariance(Eigen::Index n, double budget) {
    const ComplexMatrix a = matrix(n, n);
    ComplexMatrix s = a * a.adjoint();
    return s * (budget / s.trace().real());
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, std::sqrt(0.5)};
};

}  // namespace testutil
