#pragma once

// Cell-under-test detector: covariance of the primary cell against the
// per-measure mean of the secondary covariances, thresholded at an empirical
// clutter-only quantile.

#include <functional>

#include "geodetect/enhance.hpp"
#include "geodetect/mean.hpp"
#include "geodetect/sim.hpp"

namespace geodetect {

struct DetectorConfig {
  MeasureKind kind = MeasureKind::KullbackLeibler;
  bool enhanced = false;
  int reduced_dim = 1;      // n, used only when enhanced
  int guard_cells = 0;
  double pf = 1e-2;
  int calibration_trials = 10000;
  MeanConfig mean;          // kind is overridden to `kind` at use
};

// measure(C_primary, mean of secondary covariances), or the enhancement
// objective of the same pair when config.enhanced is set. The mean always
// uses the measure's own estimator, whatever config.mean.kind says.
double test_statistic(const DetectorConfig& config, const Scene& scene);

using SceneSource = std::function<Scene(std::uint64_t trial)>;

// Empirical threshold: the ceil((1-pf)*N)-th ascending order statistic of the
// statistic over N = calibration_trials clutter-only scenes. Enforces the
// N >= 100/pf rule as a hard precondition.
double calibrate_threshold(const DetectorConfig& config,
                           const SceneSource& clutter_only);

// Strict comparison: statistic > threshold declares the target; ties stay
// with the clutter-only hypothesis.
Hypothesis detect(double statistic, double threshold);

}  // namespace geodetect
