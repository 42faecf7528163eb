#include "geodetect/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace geodetect {

WhitenedSpectrum whitening_spectrum(const HpdMatrix& c1, const HpdMatrix& c2) {
  const RealVector raw = eig_hermitian(whiten(c1, c2).hermitian()).values;
  WhitenedSpectrum s;
  s.values.resize(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    s.values(i) = clip_for_log(raw(i));
  }
  return s;
}

double potential_term(MeasureKind kind, double lambda) {
  switch (kind) {
    case MeasureKind::RiemannianDistance: {
      const double lg = std::log(lambda);
      return lg * lg;
    }
    case MeasureKind::KullbackLeibler:
      return lambda - 1.0 - std::log(lambda);
    case MeasureKind::JensenShannon:
    case MeasureKind::LogDet:
      return std::log(lambda + 1.0) - std::log(2.0) - 0.5 * std::log(lambda);
  }
  throw Error("unreachable measure kind");
}

namespace {

double potential_sum(MeasureKind kind, const RealVector& values) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    acc += potential_term(kind, values(i));
  }
  return acc < 0.0 ? 0.0 : acc;  // terms are >= 0, rounding aside
}

}  // namespace

double potential(MeasureKind kind, const WhitenedSpectrum& s) {
  if (s.values.size() == 0) {
    throw DimensionError("potential: empty spectrum");
  }
  return potential_sum(kind, s.values);
}

double potential(MeasureKind kind, const RealVector& eigenvalues) {
  if (eigenvalues.size() == 0) {
    throw DimensionError("potential: empty spectrum");
  }
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (!(eigenvalues(i) > 0.0)) {
      throw DomainError("potential: nonpositive eigenvalue " +
                        std::to_string(eigenvalues(i)));
    }
  }
  return potential_sum(kind, eigenvalues);
}

double check_equivalence(MeasureKind kind, const HpdMatrix& c1,
                         const HpdMatrix& c2) {
  const double direct = measure(kind, c1, c2);
  const double dual = potential(kind, whitening_spectrum(c1, c2));
  return std::abs(dual - direct) / std::max(direct, 1e-12);
}

namespace {

// Validates p and returns the implied leading coordinate lambda_0.
double implied_coordinate(const AdjustedSpectrumPoint& p) {
  if (p.dim < 2) {
    throw DimensionError("adjusted spectrum needs dim >= 2");
  }
  if (p.lambda.size() != p.dim - 1) {
    throw DimensionError("adjusted spectrum: expected dim-1 free coordinates");
  }
  if (!(p.sigma2 >= 0.0)) {
    throw DomainError("adjusted spectrum: sigma2 must be >= 0");
  }
  const double budget = static_cast<double>(p.dim) * p.sigma2;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.lambda.size(); ++i) {
    if (p.lambda(i) < 0.0) {
      throw DomainError("adjusted spectrum: negative coordinate");
    }
    sum += p.lambda(i);
  }
  const double slack = 1e-9 * std::max(1.0, budget);
  if (sum > budget + slack) {
    throw DomainError("adjusted spectrum: coordinates exceed the power budget");
  }
  return std::max(budget - sum, 0.0);
}

}  // namespace

double adjusted_potential(MeasureKind kind, const AdjustedSpectrumPoint& p) {
  const double lambda0 = implied_coordinate(p);
  double acc = potential_term(kind, 1.0 + lambda0);
  for (Eigen::Index i = 0; i < p.lambda.size(); ++i) {
    acc += potential_term(kind, 1.0 + p.lambda(i));
  }
  return acc;
}

namespace {

// d/dlambda potential_term(kind, 1 + lambda)
double shifted_term_derivative(MeasureKind kind, double lambda) {
  const double v = 1.0 + lambda;
  switch (kind) {
    case MeasureKind::RiemannianDistance:
      return 2.0 * std::log(v) / v;
    case MeasureKind::KullbackLeibler:
      return 1.0 - 1.0 / v;
    case MeasureKind::JensenShannon:
    case MeasureKind::LogDet:
      // 1/(2+lambda) - 1/(2(1+lambda)) simplified over a common denominator
      return lambda / (2.0 * (2.0 + lambda) * v);
  }
  throw Error("unreachable measure kind");
}

}  // namespace

RealVector adjusted_gradient(MeasureKind kind, const AdjustedSpectrumPoint& p) {
  const double lambda0 = implied_coordinate(p);
  const double head = shifted_term_derivative(kind, lambda0);
  RealVector g(p.lambda.size());
  for (Eigen::Index i = 0; i < p.lambda.size(); ++i) {
    // lambda_0 loses what coordinate i gains, hence the -head term
    g(i) = shifted_term_derivative(kind, p.lambda(i)) - head;
  }
  return g;
}

bool interior_point(const AdjustedSpectrumPoint& p, double margin) {
  const double lambda0 = implied_coordinate(p);
  if (lambda0 <= margin) {
    return false;
  }
  for (Eigen::Index i = 0; i < p.lambda.size(); ++i) {
    if (p.lambda(i) <= margin) {
      return false;
    }
  }
  return true;
}

ExtremalSpectra extremal_spectra(MeasureKind kind, int m, double sigma2) {
  if (m < 2) {
    throw DimensionError("extremal_spectra: need m >= 2");
  }
  if (!(sigma2 >= 0.0)) {
    throw DomainError("extremal_spectra: sigma2 must be >= 0");
  }
  const double budget = static_cast<double>(m) * sigma2;
  ExtremalSpectra out;
  out.candidates.reserve(m);
  double best = -1.0;
  for (int k = 1; k <= m; ++k) {
    ExtremalCandidate cand;
    cand.k = k;
    cand.spectrum = RealVector::Zero(m);
    const double level = budget / static_cast<double>(k);
    for (int i = m - k; i < m; ++i) {
      cand.spectrum(i) = level;
    }
    cand.value = static_cast<double>(m - k) * potential_term(kind, 1.0) +
                 static_cast<double>(k) * potential_term(kind, 1.0 + level);
    // ascending k with a strict margin keeps ties at the smaller k
    if (cand.value > best + 1e-12) {
      best = cand.value;
      out.argmax = k - 1;
    }
    out.candidates.push_back(std::move(cand));
  }
  return out;
}

int optimal_enhancement_dimension(int bandwidth) {
  if (bandwidth < 1) {
    throw DomainError("optimal_enhancement_dimension: bandwidth must be >= 1");
  }
  return bandwidth;
}

namespace {

void lattice_recurse(MeasureKind kind, int m, double sigma2, double step,
                     int steps_left, Eigen::Index coord,
                     AdjustedSpectrumPoint& point, LatticeCheck& best,
                     bool& first) {
  if (coord == point.lambda.size()) {
    const double v = adjusted_potential(kind, point);
    if (first || v > best.lattice_max) {
      best.lattice_max = v;
      best.argmax_point = point.lambda;
      first = false;
    }
    return;
  }
  for (int s = 0; s <= steps_left; ++s) {
    point.lambda(coord) = static_cast<double>(s) * step;
    lattice_recurse(kind, m, sigma2, step, steps_left - s, coord + 1, point,
                    best, first);
  }
  point.lambda(coord) = 0.0;
}

}  // namespace

LatticeCheck lattice_maximize(MeasureKind kind, int m, double sigma2,
                              int steps) {
  if (m < 2 || m > 5) {
    throw DimensionError("lattice_maximize: exhaustive search is limited to m <= 5");
  }
  if (steps < 1) {
    throw DomainError("lattice_maximize: need at least 1 step");
  }
  if (!(sigma2 > 0.0)) {
    throw DomainError("lattice_maximize: sigma2 must be > 0");
  }
  const double budget = static_cast<double>(m) * sigma2;
  const double step = budget / static_cast<double>(steps);

  LatticeCheck best;
  AdjustedSpectrumPoint point;
  point.lambda = RealVector::Zero(m - 1);
  point.sigma2 = sigma2;
  point.dim = m;
  bool first = true;
  lattice_recurse(kind, m, sigma2, step, steps, 0, point, best, first);

  // analytic value must dominate the lattice, and the lattice must dominate
  // the lattice point nearest the analytic argmax
  const ExtremalSpectra analytic = extremal_spectra(kind, m, sigma2);
  const ExtremalCandidate& top = analytic.candidates[analytic.argmax];
  AdjustedSpectrumPoint near;
  near.lambda = top.spectrum.tail(m - 1);
  near.sigma2 = sigma2;
  near.dim = m;
  for (Eigen::Index i = 0; i < near.lambda.size(); ++i) {
    near.lambda(i) = std::round(near.lambda(i) / step) * step;
  }
  // rounding can push the point past the budget; walk the largest coordinate
  // back down until feasible
  for (;;) {
    double sum = near.lambda.sum();
    if (sum <= budget * (1.0 + 1e-12)) {
      break;
    }
    Eigen::Index top_i = 0;
    near.lambda.maxCoeff(&top_i);
    near.lambda(top_i) -= step;
  }
  const double near_value = adjusted_potential(kind, near);
  best.agrees = (top.value >= best.lattice_max - 1e-9) &&
                (best.lattice_max >= near_value - 1e-12);
  return best;
}

}  // namespace geodetect
