#pragma once

// Per-measure matrix means over a set of HPD covariances. Each measure gets
// the estimator its own geometry asks for:
//   kld: closed-form harmonic mean, ((1/K) sum C_k^{-1})^{-1}
//   rd:  Karcher flow on the geodesic manifold, fixed-point iteration with a
//        backtracking step size
//   jsd/ldd: fixed point A <- ((1/K) sum ((C_k + A)/2)^{-1})^{-1}
// Sums are accumulated with a fixed pairwise tree, so results do not depend
// on platform-specific reassociation.

#include <vector>

#include "geodetect/measures.hpp"

namespace geodetect {

struct MeanConfig {
  MeasureKind kind = MeasureKind::KullbackLeibler;
  int max_iterations = 200;
  double tolerance = 1e-8;   // relative Frobenius norm of the update step
  double initial_step = 0.0; // rd flow only; 0 means 1/K
};

struct MeanResult {
  HpdMatrix mean;
  bool converged = false;
  int iterations = 0;
  double final_step = 0.0;  // last relative step norm
  double objective = 0.0;   // minimized functional at the returned mean
};

// K = 1 returns the single member unchanged with converged = true. The
// objective is sum_k D(C_k, mean) for rd and jsd/ldd, and sum_k D(mean, C_k)
// for kld (the order its harmonic mean minimizes).
MeanResult mean_matrix(const std::vector<HpdMatrix>& members,
                       const MeanConfig& config);

}  // namespace geodetect
