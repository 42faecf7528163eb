#include "geodetect/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geodetect {

namespace {

void require_reduction(Eigen::Index m, int n) {
  if (n < 1 || 2 * static_cast<Eigen::Index>(n) > m) {
    throw DomainError("reduction needs 1 <= n <= m/2, got n = " +
                      std::to_string(n) + " at m = " + std::to_string(m));
  }
}

}  // namespace

std::vector<Interval> interlace_bounds(const WhitenedSpectrum& full, int n) {
  const Eigen::Index m = full.values.size();
  require_reduction(m, n);
  std::vector<Interval> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].lower = full.values(i + m - n);
    out[i].upper = full.values(i);
  }
  return out;
}

RealVector optimal_reduced_spectrum(MeasureKind kind,
                                    const WhitenedSpectrum& full, int n) {
  const std::vector<Interval> bounds = interlace_bounds(full, n);
  RealVector mu(n);
  for (int i = 0; i < n; ++i) {
    const double at_lower = potential_term(kind, bounds[i].lower);
    const double at_upper = potential_term(kind, bounds[i].upper);
    // near-ties go to the larger endpoint, which is always `upper`
    mu(i) = at_lower > at_upper + 1e-12 ? bounds[i].lower : bounds[i].upper;
  }
  return mu;
}

Matrix reduction_basis(const EigenDecomposition& whitened,
                       const RealVector& mu) {
  const Eigen::Index m = whitened.values.size();
  const int n = static_cast<int>(mu.size());
  require_reduction(m, n);
  Matrix q(m, n);
  for (int i = 0; i < n; ++i) {
    const double hi = whitened.values(i);
    const double lo = whitened.values(i + m - n);
    const double tol = 1e-10 * (1.0 + std::abs(hi));
    if (mu(i) < lo - tol || mu(i) > hi + tol) {
      throw DomainError("reduction_basis: target eigenvalue " +
                        std::to_string(mu(i)) + " outside [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    double t = 1.0;
    if (hi - lo > 1e-14 * std::max(1.0, std::abs(hi))) {
      t = std::min(1.0, std::max(0.0, (mu(i) - lo) / (hi - lo)));
    }
    q.col(i) = std::sqrt(t) * whitened.vectors.col(i) +
               std::sqrt(1.0 - t) * whitened.vectors.col(i + m - n);
  }
  // the pairs (i, i+m-n) never collide across columns, so Q is orthonormal up
  // to rounding; one modified Gram-Schmidt pass scrubs the rounding
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    }
    q.col(j) /= q.col(j).norm();
  }
  return q;
}

EnhancementResult enhanced_mapping(MeasureKind kind, const HpdMatrix& c1,
                                   const HpdMatrix& c2, int n) {
  require_reduction(c1.dim(), n);
  EigenDecomposition d = eig_hermitian(whiten(c1, c2).hermitian());
  for (Eigen::Index i = 0; i < d.values.size(); ++i) {
    d.values(i) = clip_for_log(d.values(i));
  }
  WhitenedSpectrum full;
  full.values = d.values;
  EnhancementResult out;
  out.n = n;
  out.spectrum = optimal_reduced_spectrum(kind, full, n);
  out.mapping =
      matrix_function(c2, MatrixFunc::InvSqrt).mat() * reduction_basis(d, out.spectrum);
  out.objective = 0.0;
  for (int i = 0; i < n; ++i) {
    out.objective += potential_term(kind, out.spectrum(i));
  }
  return out;
}

double enhanced_measure(MeasureKind kind, const HpdMatrix& c1,
                        const HpdMatrix& c2, const Matrix& w) {
  if (w.rows() != c1.dim() || w.cols() < 1 || w.cols() > w.rows()) {
    throw DimensionError("enhanced_measure: W must be m x n with 1 <= n <= m");
  }
  if (c1.dim() != c2.dim()) {
    throw DimensionError("enhanced_measure: dimension mismatch");
  }
  qr_thin(w);  // RankError on column-rank deficiency
  // exact-Hermitian congruences, projected so rounding cannot fail the gate
  const Matrix r1 = w.adjoint() * c1.mat() * w;
  const Matrix r2 = w.adjoint() * c2.mat() * w;
  const HpdMatrix p1(Matrix((r1 + r1.adjoint()) / 2.0));
  const HpdMatrix p2(Matrix((r2 + r2.adjoint()) / 2.0));
  return measure(kind, p1, p2);
}

}  // namespace geodetect
