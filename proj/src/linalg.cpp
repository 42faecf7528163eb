#include "geodetect/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <atomic>
#include <cmath>
#include <sstream>
#include <utility>

namespace geodetect {

namespace {

std::string dim_string(const Matrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

}  // namespace

HermitianMatrix::HermitianMatrix(Matrix a) : a_(std::move(a)) {
  if (a_.rows() == 0 || a_.rows() != a_.cols()) {
    throw DimensionError("HermitianMatrix: need a nonempty square matrix, got " +
                         dim_string(a_));
  }
  const double scale = a_.cwiseAbs().maxCoeff();
  const double asym = (a_ - a_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1e-300)) {
    std::ostringstream msg;
    msg << "HermitianMatrix: asymmetry " << asym << " exceeds 1e-12 of scale "
        << scale;
    throw NotHermitianError(msg.str());
  }
  a_ = ((a_ + a_.adjoint()) / 2.0).eval();
}

HpdMatrix::HpdMatrix(HermitianMatrix a) : a_(std::move(a)) {
  Eigen::LLT<Matrix> llt(a_.mat());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(
        "HpdMatrix: Cholesky failed, matrix is not positive definite");
  }
}

EigenDecomposition eig_hermitian(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  if (es.info() != Eigen::Success) {
    throw Error("eig_hermitian: eigensolver failed to converge on a " +
                dim_string(a.mat()) + " matrix with max|entry| " +
                std::to_string(a.mat().cwiseAbs().maxCoeff()));
  }
  // Eigen returns ascending order; the library convention is descending.
  EigenDecomposition d;
  d.values = es.eigenvalues().reverse();
  d.vectors = es.eigenvectors().rowwise().reverse();
  return d;
}

Matrix cholesky_factor(const HpdMatrix& a) {
  Eigen::LLT<Matrix> llt(a.mat());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("cholesky_factor: factorization failed");
  }
  return llt.matrixL();
}

double logdet(const HpdMatrix& a) {
  Eigen::LLT<Matrix> llt(a.mat());
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("logdet: Cholesky failed");
  }
  double acc = 0.0;
  const Matrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    acc += std::log(l(i, i).real());
  }
  return 2.0 * acc;
}

HermitianMatrix matrix_function(const HpdMatrix& a, MatrixFunc f) {
  const EigenDecomposition d = eig_hermitian(a.hermitian());
  RealVector fv(d.values.size());
  for (Eigen::Index i = 0; i < d.values.size(); ++i) {
    const double v = d.values[i];
    if (v <= 0.0) {
      // certification can pass while an eigenvalue underflows to <= 0
      throw NotPositiveDefiniteError(
          "matrix_function: nonpositive eigenvalue " + std::to_string(v));
    }
    switch (f) {
      case MatrixFunc::Sqrt:
        fv[i] = std::sqrt(v);
        break;
      case MatrixFunc::InvSqrt:
        fv[i] = 1.0 / std::sqrt(v);
        break;
      case MatrixFunc::Inverse:
        fv[i] = 1.0 / v;
        break;
      case MatrixFunc::Log:
        fv[i] = std::log(v);
        break;
    }
  }
  // V f(L) V^H is Hermitian in exact arithmetic; project the rounding away
  // so downstream certification cannot trip on ill-conditioned inputs
  const Matrix out = d.vectors * fv.asDiagonal() * d.vectors.adjoint();
  return HermitianMatrix(Matrix((out + out.adjoint()) / 2.0));
}

HpdMatrix whiten(const HpdMatrix& c1, const HpdMatrix& c2) {
  if (c1.dim() != c2.dim()) {
    throw DimensionError("whiten: dimension mismatch " + dim_string(c1.mat()) +
                         " vs " + dim_string(c2.mat()));
  }
  const Matrix s = matrix_function(c2, MatrixFunc::InvSqrt).mat();
  const Matrix w = s * c1.mat() * s;
  return HpdMatrix(Matrix((w + w.adjoint()) / 2.0));
}

ThinQr qr_thin(const Matrix& w) {
  const Eigen::Index m = w.rows();
  const Eigen::Index n = w.cols();
  if (n < 1 || n > m) {
    throw DimensionError("qr_thin: need 1 <= cols <= rows, got " +
                         dim_string(w));
  }
  Eigen::HouseholderQR<Matrix> qr(w);
  ThinQr out;
  out.q = qr.householderQ() * Matrix::Identity(m, n);
  out.r = qr.matrixQR().topLeftCorner(n, n).template triangularView<Eigen::Upper>();
  const double gate = 1e-12 * w.norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(out.r(i, i)) < gate) {
      throw RankError("qr_thin: diagonal of R below 1e-12 * ||W||, column " +
                      std::to_string(i));
    }
  }
  return out;
}

namespace {
std::atomic<std::uint64_t> clip_count{0};
}

double clip_for_log(double eigenvalue) {
  constexpr double floor = 1e-14;
  if (eigenvalue < floor) {
    clip_count.fetch_add(1, std::memory_order_relaxed);
    return floor;
  }
  return eigenvalue;
}

std::uint64_t clipped_eigenvalue_count() {
  return clip_count.load(std::memory_order_relaxed);
}

}  // namespace geodetect
