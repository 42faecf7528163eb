#pragma once

// Dissimilarity measures between HPD covariance matrices. All four are
// congruence invariant: D(W^H C1 W, W^H C2 W) = D(C1, C2) for invertible W.

#include <string_view>

#include "geodetect/linalg.hpp"

namespace geodetect {

// JS is the symmetrized log-det divergence and coincides with LD exactly;
// both enum values are kept so configs can name either.
enum class MeasureKind { RiemannianDistance, KullbackLeibler, JensenShannon, LogDet };

std::string_view to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(std::string_view name);  // ConfigError

// RiemannianDistance: squared geodesic distance, sum of log^2 eigenvalues of
//   C2^{-1/2} C1 C2^{-1/2}.
// KullbackLeibler: tr(C1 C2^{-1} - I) - log det(C1 C2^{-1}), solver route
//   (no eigendecomposition) so the spectral identity stays a real check.
// JensenShannon / LogDet: log det((C1+C2)/2) - (log det C1 + log det C2)/2.
double measure(MeasureKind kind, const HpdMatrix& c1, const HpdMatrix& c2);

// Relative change of the measure under the congruence C -> W^H C W.
// Returns |D(transformed) - D| / max(D, 1e-12); throws RankError when W is
// numerically singular.
double check_affine_invariance(MeasureKind kind, const HpdMatrix& c1,
                               const HpdMatrix& c2, const Matrix& w);

}  // namespace geodetect
