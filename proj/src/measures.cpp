#include "geodetect/measures.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>

namespace geodetect {

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::RiemannianDistance:
      return "rd";
    case MeasureKind::KullbackLeibler:
      return "kld";
    case MeasureKind::JensenShannon:
      return "jsd";
    case MeasureKind::LogDet:
      return "ldd";
  }
  throw Error("unreachable measure kind");
}

MeasureKind measure_kind_from_string(std::string_view name) {
  if (name == "rd") return MeasureKind::RiemannianDistance;
  if (name == "kld") return MeasureKind::KullbackLeibler;
  if (name == "jsd") return MeasureKind::JensenShannon;
  if (name == "ldd") return MeasureKind::LogDet;
  throw ConfigError("unknown measure '" + std::string(name) +
                    "', expected rd, kld, jsd or ldd");
}

namespace {

// log det of a matrix already known to be HPD up to rounding
double logdet_raw(const Matrix& a, const char* who) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(std::string(who) + ": Cholesky failed");
  }
  double acc = 0.0;
  const Matrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    acc += std::log(l(i, i).real());
  }
  return 2.0 * acc;
}

double kl_raw(const Matrix& c1, const Matrix& c2) {
  Eigen::LLT<Matrix> llt(c2);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("measure: reference matrix not HPD");
  }
  const Matrix x = llt.solve(c1);  // C2^{-1} C1
  const double m = static_cast<double>(c1.rows());
  return x.trace().real() - m - (logdet_raw(c1, "measure") - logdet_raw(c2, "measure"));
}

double logdet_divergence(const Matrix& c1, const Matrix& c2) {
  const Matrix mid = ((c1 + c2) / 2.0).eval();
  return logdet_raw(mid, "measure") -
         0.5 * (logdet_raw(c1, "measure") + logdet_raw(c2, "measure"));
}

}  // namespace

double measure(MeasureKind kind, const HpdMatrix& c1, const HpdMatrix& c2) {
  if (c1.dim() != c2.dim()) {
    throw DimensionError("measure: dimension mismatch");
  }
  double d = 0.0;
  switch (kind) {
    case MeasureKind::RiemannianDistance: {
      const RealVector lam = eig_hermitian(whiten(c1, c2).hermitian()).values;
      for (Eigen::Index i = 0; i < lam.size(); ++i) {
        const double lg = std::log(clip_for_log(lam(i)));
        d += lg * lg;
      }
      break;
    }
    case MeasureKind::KullbackLeibler:
      d = kl_raw(c1.mat(), c2.mat());
      break;
    case MeasureKind::JensenShannon:
    case MeasureKind::LogDet:
      d = logdet_divergence(c1.mat(), c2.mat());
      break;
  }
  // nonnegative by theory; rounding can land barely below zero
  return d < 0.0 ? 0.0 : d;
}

double check_affine_invariance(MeasureKind kind, const HpdMatrix& c1,
                               const HpdMatrix& c2, const Matrix& w) {
  if (w.rows() != w.cols() || w.rows() != c1.dim()) {
    throw DimensionError("check_affine_invariance: W must be square of matching size");
  }
  qr_thin(w);  // rank gate, throws RankError on singular W
  const double base = measure(kind, c1, c2);
  // the congruence is Hermitian in exact arithmetic; project the rounded
  // product back so ill-conditioned W cannot trip the certification gate
  auto congruence = [&w](const HpdMatrix& c) {
    const Matrix p = w.adjoint() * c.mat() * w;
    return HpdMatrix(Matrix((p + p.adjoint()) / 2.0));
  };
  const double moved = measure(kind, congruence(c1), congruence(c2));
  return std::abs(moved - base) / std::max(base, 1e-12);
}

}  // namespace geodetect
