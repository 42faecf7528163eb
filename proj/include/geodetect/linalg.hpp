#pragma once

// Complex Hermitian/HPD matrix layer used by every other part of the library:
// validated matrix wrappers, eigendecomposition with a fixed descending order,
// Cholesky, spectral matrix functions, whitened congruence and thin QR.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace geodetect {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// invalid shapes or mismatched dimensions
struct DimensionError : Error {
  using Error::Error;
};
struct NotHermitianError : Error {
  using Error::Error;
};
struct NotPositiveDefiniteError : Error {
  using Error::Error;
};
// all-zero observation vectors (covariance would be singular by construction)
struct ZeroSnapshotError : Error {
  using Error::Error;
};
struct RankError : Error {
  using Error::Error;
};
// arguments outside a function's mathematical domain
struct DomainError : Error {
  using Error::Error;
};
// bad run configuration (CLI flags, config files, detector settings)
struct ConfigError : Error {
  using Error::Error;
};

// Square complex matrix certified Hermitian on construction. Inputs whose
// asymmetry exceeds 1e-12 relative to the largest entry are rejected; accepted
// ones are symmetrized exactly, (A + A^H)/2, so downstream code can rely on
// entries[i][j] == conj(entries[j][i]) to the last bit.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix a);
  const Matrix& mat() const { return a_; }
  Eigen::Index dim() const { return a_.rows(); }

 private:
  Matrix a_;
};

// Hermitian positive definite matrix; the certificate is a successful Cholesky
// factorization at construction time.
class HpdMatrix {
 public:
  explicit HpdMatrix(HermitianMatrix a);
  explicit HpdMatrix(Matrix a) : HpdMatrix(HermitianMatrix(std::move(a))) {}
  const Matrix& mat() const { return a_.mat(); }
  const HermitianMatrix& hermitian() const { return a_; }
  Eigen::Index dim() const { return a_.dim(); }

 private:
  HermitianMatrix a_;
};

struct EigenDecomposition {
  RealVector values;  // sorted descending
  Matrix vectors;     // unitary, column k pairs with values[k]
};

EigenDecomposition eig_hermitian(const HermitianMatrix& a);

// Lower-triangular L with A = L L^H; throws NotPositiveDefiniteError.
Matrix cholesky_factor(const HpdMatrix& a);

// log det A via the Cholesky factor; no eigendecomposition involved.
double logdet(const HpdMatrix& a);

enum class MatrixFunc { Sqrt, InvSqrt, Inverse, Log };

// Spectral calculus V f(D) V^H. Sqrt/InvSqrt/Inverse results are HPD, Log is
// merely Hermitian, hence the common HermitianMatrix return type.
HermitianMatrix matrix_function(const HpdMatrix& a, MatrixFunc f);

// C2^{-1/2} C1 C2^{-1/2}: congruence by the inverse square root of the
// reference matrix. Output certified HPD.
HpdMatrix whiten(const HpdMatrix& c1, const HpdMatrix& c2);

struct ThinQr {
  Matrix q;  // m x n, Q^H Q = I
  Matrix r;  // n x n upper triangular
};

// Thin QR with a rank gate: |r_ii| < 1e-12 * ||W||_F means rank deficiency.
ThinQr qr_thin(const Matrix& w);

// Floor applied to eigenvalues about to enter a logarithm when the input is
// numerically semidefinite. Every clip bumps a process-wide counter so tests
// can detect silent flooring instead of chasing NaNs.
double clip_for_log(double eigenvalue);
std::uint64_t clipped_eigenvalue_count();

}  // namespace geodetect
