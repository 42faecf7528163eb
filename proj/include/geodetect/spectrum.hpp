#pragma once

// Whitening-spectrum side of the measures: every measure in measures.hpp
// equals a separable potential evaluated on the eigenvalues of
// C2^{-1/2} C1 C2^{-1/2}. This file holds the potentials, the equivalence
// check, and the detection-analysis tools built on the same potentials
// (adjusted potential on a power-constrained spectrum, its gradient, flat
// extremal spectra, brute-force lattice cross-check).

#include <vector>

#include "geodetect/measures.hpp"

namespace geodetect {

struct WhitenedSpectrum {
  RealVector values;  // descending, strictly positive (floored at 1e-14)
};

// Eigenvalues of C2^{-1/2} C1 C2^{-1/2}, descending. Numerically nonpositive
// values are floored (see clip_for_log) instead of failing.
WhitenedSpectrum whitening_spectrum(const HpdMatrix& c1, const HpdMatrix& c2);

// Scalar summand of each potential at a single eigenvalue (lambda > 0):
//   rd:  log^2(lambda)
//   kld: lambda - 1 - log(lambda)
//   jsd/ldd: log((lambda + 1) / (2 sqrt(lambda)))
// All three are 0 at lambda = 1 and positive elsewhere.
double potential_term(MeasureKind kind, double lambda);

double potential(MeasureKind kind, const WhitenedSpectrum& s);
// Raw-eigenvalue overload; throws DomainError on any value <= 0.
double potential(MeasureKind kind, const RealVector& eigenvalues);

// |potential(whitening spectrum) - measure| / max(measure, 1e-12).
double check_equivalence(MeasureKind kind, const HpdMatrix& c1,
                         const HpdMatrix& c2);

// Point on the power-constrained target spectrum simplex: free coordinates
// lambda[0..m-2] >= 0 are the trailing target eigenvalue excesses, the
// leading one is implied, lambda_0 = m*sigma2 - sum(lambda). The adjusted
// potential is the plain potential of (1 + lambda_0, 1 + lambda[0], ...).
struct AdjustedSpectrumPoint {
  RealVector lambda;
  double sigma2 = 0.0;
  int dim = 0;  // m, so lambda has m-1 entries
};

double adjusted_potential(MeasureKind kind, const AdjustedSpectrumPoint& p);

// Analytic gradient of the adjusted potential in the free coordinates.
// Valid on the closed simplex; boundary points are fine to evaluate.
RealVector adjusted_gradient(MeasureKind kind, const AdjustedSpectrumPoint& p);

// True when every free coordinate and the implied one sit at least `margin`
// away from zero (strictly inside the simplex).
bool interior_point(const AdjustedSpectrumPoint& p, double margin = 0.0);

// Flat candidate with k occupied bins: m - k zeros followed by k entries of
// m*sigma2/k. Theory says the potential maximum over the simplex is attained
// at one of these.
struct ExtremalCandidate {
  int k = 0;
  RealVector spectrum;  // length m, the full coordinate vector
  double value = 0.0;
};

struct ExtremalSpectra {
  std::vector<ExtremalCandidate> candidates;  // k = 1 .. m
  int argmax = 0;                             // index into candidates
};

// sigma2 = per-bin clutter-relative target power; values within 1e-12 tie
// toward smaller k.
ExtremalSpectra extremal_spectra(MeasureKind kind, int m, double sigma2);

// Reduced dimension that preserves the extremal structure of a bandwidth-B
// target: n = B.
int optimal_enhancement_dimension(int bandwidth);

struct LatticeCheck {
  double lattice_max = 0.0;
  RealVector argmax_point;  // free coordinates of the best lattice point
  bool agrees = false;
};

// Exhaustive maximization over the simplex lattice with step m*sigma2/steps.
// Exponential in m, restricted to m <= 5. `agrees` holds when the analytic
// extremal value dominates the lattice (up to 1e-9) and the lattice beats the
// lattice point nearest the analytic argmax (up to 1e-12).
LatticeCheck lattice_maximize(MeasureKind kind, int m, double sigma2,
                              int steps = 20);

}  // namespace geodetect
