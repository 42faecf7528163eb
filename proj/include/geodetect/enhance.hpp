#pragma once

// Measure-optimal dimension reduction. Projecting both covariances through a
// full-rank W (m x n) can only shrink a measure; over all W the reduced
// whitening spectrum is constrained coordinatewise to interlacing intervals
// of the full spectrum, and because the potentials are separable the optimum
// sits at interval endpoints. The optimal W is assembled from eigenvector
// pairs, no search involved.

#include <vector>

#include "geodetect/spectrum.hpp"

namespace geodetect {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Reachable range of reduced eigenvalue i (0-based, i < n):
// [lambda_{i+m-n}, lambda_i] of the full whitening spectrum. Requires
// 1 <= n <= m/2.
std::vector<Interval> interlace_bounds(const WhitenedSpectrum& full, int n);

// Per-coordinate argmax of the potential over each interval; the candidates
// are the two endpoints. Ties within 1e-12 resolve to the larger endpoint.
RealVector optimal_reduced_spectrum(MeasureKind kind,
                                    const WhitenedSpectrum& full, int n);

// Orthonormal Q (m x n) whose compression of the whitened matrix has spectrum
// mu: column i mixes eigenvectors i and i+m-n with the weight that lands the
// Rayleigh quotient on mu[i]. Throws DomainError when mu[i] leaves its
// interval.
Matrix reduction_basis(const EigenDecomposition& whitened, const RealVector& mu);

struct EnhancementResult {
  int n = 0;
  RealVector spectrum;  // mu*, descending
  Matrix mapping;       // W* = C2^{-1/2} Q, m x n
  double objective;     // potential of mu*, the largest reachable reduced measure
};

// End-to-end: whiten, pick the optimal reduced spectrum, build the mapping.
EnhancementResult enhanced_mapping(MeasureKind kind, const HpdMatrix& c1,
                                   const HpdMatrix& c2, int n);

// Measure between the compressions W^H C1 W and W^H C2 W for a caller-chosen
// full-column-rank W; useful to confirm nothing beats the closed form.
double enhanced_measure(MeasureKind kind, const HpdMatrix& c1,
                        const HpdMatrix& c2, const Matrix& w);

}  // namespace geodetect
