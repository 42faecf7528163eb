#include "geodetect/mean.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace geodetect {

namespace {

void validate(const std::vector<HpdMatrix>& members, const MeanConfig& cfg) {
  if (members.empty()) {
    throw DimensionError("mean_matrix: empty member list");
  }
  const Eigen::Index m = members.front().dim();
  for (const HpdMatrix& c : members) {
    if (c.dim() != m) {
      throw DimensionError("mean_matrix: members have mixed dimensions");
    }
  }
  if (cfg.max_iterations < 1) {
    throw ConfigError("mean_matrix: max_iterations must be >= 1");
  }
  if (!(cfg.tolerance > 0.0)) {
    throw ConfigError("mean_matrix: tolerance must be > 0");
  }
}

// fixed-shape pairwise reduction over [lo, hi); the tree depends only on the
// index range, so the rounding pattern is stable
Matrix pairwise_sum(std::size_t lo, std::size_t hi,
                    const std::function<Matrix(std::size_t)>& term) {
  if (hi - lo == 1) {
    return term(lo);
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

Matrix symmetrized(const Matrix& a) { return ((a + a.adjoint()) / 2.0).eval(); }

Matrix inverse_of(const Matrix& a, const char* who) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(std::string(who) + ": singular intermediate");
  }
  return symmetrized(llt.solve(Matrix::Identity(a.rows(), a.cols())));
}

double logdet_llt(const Matrix& a, const char* who) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(std::string(who) + ": singular intermediate");
  }
  double acc = 0.0;
  const Matrix l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    acc += std::log(l(i, i).real());
  }
  return 2.0 * acc;
}

HpdMatrix arithmetic_mean(const std::vector<HpdMatrix>& members) {
  const double k = static_cast<double>(members.size());
  Matrix sum = pairwise_sum(0, members.size(),
                            [&](std::size_t i) { return members[i].mat(); });
  return HpdMatrix(Matrix(sum / k));
}

double descent_slack(double objective) {
  return 1e-12 * std::max(1.0, std::abs(objective));
}

// --- harmonic route (kld) ---------------------------------------------------

MeanResult kld_mean(const std::vector<HpdMatrix>& members) {
  const double k = static_cast<double>(members.size());
  Matrix h = pairwise_sum(0, members.size(), [&](std::size_t i) {
    return inverse_of(members[i].mat(), "mean_matrix");
  });
  HpdMatrix mean(inverse_of(Matrix(h / k), "mean_matrix"));
  double obj = 0.0;
  for (const HpdMatrix& c : members) {
    obj += measure(MeasureKind::KullbackLeibler, mean, c);
  }
  return MeanResult{std::move(mean), true, 0, 0.0, obj};
}

// --- geodesic route (rd) ----------------------------------------------------

struct RdEval {
  HpdMatrix point;
  Matrix sqrt;      // point^{1/2}
  double obj;       // sum_k ||log(point^{-1/2} C_k point^{-1/2})||_F^2
  Matrix log_sum;   // sum_k log(point^{-1/2} C_k point^{-1/2})
};

RdEval rd_evaluate(const std::vector<HpdMatrix>& members, HpdMatrix point) {
  const EigenDecomposition d = eig_hermitian(point.hermitian());
  const Eigen::Index m = d.values.size();
  RealVector rt(m);
  RealVector irt(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (d.values(i) <= 0.0) {
      throw NotPositiveDefiniteError("mean_matrix: singular intermediate");
    }
    rt(i) = std::sqrt(d.values(i));
    irt(i) = 1.0 / rt(i);
  }
  const Matrix r = d.vectors * rt.asDiagonal() * d.vectors.adjoint();
  const Matrix rinv = d.vectors * irt.asDiagonal() * d.vectors.adjoint();

  std::vector<Matrix> logs;
  logs.reserve(members.size());
  double obj = 0.0;
  for (const HpdMatrix& c : members) {
    const Matrix w = symmetrized(rinv * c.mat() * rinv);
    const EigenDecomposition wd = eig_hermitian(HermitianMatrix(w));
    RealVector lg(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      lg(i) = std::log(clip_for_log(wd.values(i)));
      obj += lg(i) * lg(i);
    }
    logs.push_back(wd.vectors * lg.asDiagonal() * wd.vectors.adjoint());
  }
  Matrix s = pairwise_sum(0, logs.size(),
                          [&](std::size_t i) { return logs[i]; });
  return RdEval{std::move(point), r, obj, symmetrized(s)};
}

MeanResult rd_mean(const std::vector<HpdMatrix>& members,
                   const MeanConfig& cfg) {
  const double k = static_cast<double>(members.size());
  RdEval cur = rd_evaluate(members, arithmetic_mean(members));
  const double base_step =
      cfg.initial_step > 0.0 ? cfg.initial_step : 1.0 / k;

  bool converged = false;
  int iterations = 0;
  double final_step = 0.0;
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    const EigenDecomposition sd = eig_hermitian(HermitianMatrix(cur.log_sum));
    std::optional<RdEval> next;
    double eps = base_step;
    for (int halving = 0; halving < 31; ++halving) {
      const RealVector expd = (sd.values.array() * eps).exp();
      const Matrix move = sd.vectors * expd.asDiagonal() * sd.vectors.adjoint();
      RdEval cand =
          rd_evaluate(members, HpdMatrix(symmetrized(cur.sqrt * move * cur.sqrt)));
      if (cand.obj <= cur.obj + descent_slack(cur.obj)) {
        next = std::move(cand);
        break;
      }
      eps /= 2.0;
    }
    if (!next) {
      break;  // no descent direction left at float resolution
    }
    final_step =
        (next->point.mat() - cur.point.mat()).norm() / cur.point.mat().norm();
    cur = std::move(*next);
    iterations = t;
    if (final_step < cfg.tolerance) {
      converged = true;
      break;
    }
  }
  return MeanResult{std::move(cur.point), converged, iterations, final_step,
                    cur.obj};
}

// --- fixed-point route (jsd/ldd) ---------------------------------------------

struct LdEval {
  HpdMatrix point;
  double obj;          // sum_k D_ld(C_k, point)
  Matrix fixed_point;  // ((1/K) sum ((C_k + point)/2)^{-1})^{-1}
};

LdEval ld_evaluate(const std::vector<HpdMatrix>& members, HpdMatrix point,
                   double member_logdet_half_sum) {
  const double k = static_cast<double>(members.size());
  double obj = -0.5 * k * logdet_llt(point.mat(), "mean_matrix") -
               member_logdet_half_sum;
  std::vector<Matrix> inverses;
  inverses.reserve(members.size());
  for (const HpdMatrix& c : members) {
    const Matrix mid = ((c.mat() + point.mat()) / 2.0).eval();
    Eigen::LLT<Matrix> llt(mid);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefiniteError("mean_matrix: singular intermediate");
    }
    const Matrix l = llt.matrixL();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      obj += 2.0 * std::log(l(i, i).real());
    }
    inverses.push_back(
        symmetrized(llt.solve(Matrix::Identity(mid.rows(), mid.cols()))));
  }
  Matrix h = pairwise_sum(0, inverses.size(),
                          [&](std::size_t i) { return inverses[i]; });
  return LdEval{std::move(point), obj,
                inverse_of(Matrix(h / k), "mean_matrix")};
}

MeanResult ld_mean(const std::vector<HpdMatrix>& members,
                   const MeanConfig& cfg) {
  double half_sum = 0.0;
  for (const HpdMatrix& c : members) {
    half_sum += 0.5 * logdet_llt(c.mat(), "mean_matrix");
  }
  LdEval cur = ld_evaluate(members, arithmetic_mean(members), half_sum);

  bool converged = false;
  int iterations = 0;
  double final_step = 0.0;
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    std::optional<LdEval> next;
    double alpha = 1.0;
    for (int halving = 0; halving < 31; ++halving) {
      // alpha = 1 is the plain fixed-point update; smaller alpha blends back
      // toward the current iterate when the update overshoots
      const Matrix raw = ((1.0 - alpha) * cur.point.mat() +
                          alpha * cur.fixed_point)
                             .eval();
      LdEval cand = ld_evaluate(members, HpdMatrix(symmetrized(raw)), half_sum);
      if (cand.obj <= cur.obj + descent_slack(cur.obj)) {
        next = std::move(cand);
        break;
      }
      alpha /= 2.0;
    }
    if (!next) {
      break;
    }
    final_step =
        (next->point.mat() - cur.point.mat()).norm() / cur.point.mat().norm();
    cur = std::move(*next);
    iterations = t;
    if (final_step < cfg.tolerance) {
      converged = true;
      break;
    }
  }
  return MeanResult{std::move(cur.point), converged, iterations, final_step,
                    cur.obj};
}

}  // namespace

MeanResult mean_matrix(const std::vector<HpdMatrix>& members,
                       const MeanConfig& config) {
  validate(members, config);
  if (members.size() == 1) {
    return MeanResult{members.front(), true, 0, 0.0, 0.0};
  }
  switch (config.kind) {
    case MeasureKind::KullbackLeibler:
      return kld_mean(members);
    case MeasureKind::RiemannianDistance:
      return rd_mean(members, config);
    case MeasureKind::JensenShannon:
    case MeasureKind::LogDet:
      return ld_mean(members, config);
  }
  throw Error("unreachable measure kind");
}

}  // namespace geodetect
