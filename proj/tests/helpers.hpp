#pragma once

// Shared generators for the unit tests: seeded random snapshots, HPD matrices
// with controlled conditioning, random unitaries. Everything routes through
// the library Rng so failures replay exactly.

#include <algorithm>
#include <cmath>

#include "geodetect/linalg.hpp"
#include "geodetect/rng.hpp"
#include "geodetect/signal.hpp"

namespace testutil {

using geodetect::Complex;
using geodetect::HpdMatrix;
using geodetect::Matrix;
using geodetect::RealVector;
using geodetect::Rng;
using geodetect::Vector;

inline Vector random_snapshot(int m, Rng& rng) {
  Vector x(m);
  for (int i = 0; i < m; ++i) {
    x(i) = rng.cnormal();
  }
  return x;
}

inline Matrix random_matrix(int rows, int cols, Rng& rng) {
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      a(i, j) = rng.cnormal();
    }
  }
  return a;
}

// Haar-ish unitary from the QR of a Gaussian matrix.
inline Matrix random_unitary(int m, Rng& rng) {
  return geodetect::qr_thin(random_matrix(m, m, rng)).q;
}

// HPD with eigenvalues spread log-uniformly over [1/sqrt(spread), sqrt(spread)].
inline HpdMatrix random_hpd(int m, Rng& rng, double spread = 100.0) {
  const Matrix q = random_unitary(m, rng);
  RealVector d(m);
  const double half = 0.5 * std::log(spread);
  for (int i = 0; i < m; ++i) {
    d(i) = std::exp(half * (2.0 * rng.uniform() - 1.0));
  }
  Matrix a = q * d.asDiagonal() * q.adjoint();
  return HpdMatrix(Matrix(((a + a.adjoint()) / 2.0).eval()));
}

// Toeplitz HPD from a random snapshot, the texture every detector input has.
inline HpdMatrix random_toeplitz_hpd(int m, Rng& rng) {
  return geodetect::toeplitz_covariance(random_snapshot(m, rng));
}

// Invertible W with singular values in [1/sqrt(spread), sqrt(spread)].
inline Matrix random_invertible(int m, Rng& rng, double spread = 100.0) {
  const Matrix u = random_unitary(m, rng);
  const Matrix v = random_unitary(m, rng);
  RealVector d(m);
  const double half = 0.5 * std::log(spread);
  for (int i = 0; i < m; ++i) {
    d(i) = std::exp(half * (2.0 * rng.uniform() - 1.0));
  }
  return u * d.asDiagonal() * v.adjoint();
}

inline double rel_err(const Matrix& got, const Matrix& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace testutil
