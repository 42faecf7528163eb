#include "geodetect/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "geodetect/signal.hpp"

namespace geodetect {

double test_statistic(const DetectorConfig& config, const Scene& scene) {
  if (scene.secondary.empty()) {
    throw DimensionError("test_statistic: no secondary cells");
  }
  const Eigen::Index m = scene.primary.size();
  for (const Vector& cell : scene.secondary) {
    if (cell.size() != m) {
      throw DimensionError("test_statistic: mixed cell lengths");
    }
  }

  std::vector<HpdMatrix> covs;
  covs.reserve(scene.secondary.size());
  for (const Vector& cell : scene.secondary) {
    covs.push_back(toeplitz_covariance(cell));
  }
  MeanConfig mean_config = config.mean;
  mean_config.kind = config.kind;
  const MeanResult mean = mean_matrix(covs, mean_config);

  const HpdMatrix primary = toeplitz_covariance(scene.primary);
  if (config.enhanced) {
    return enhanced_mapping(config.kind, primary, mean.mean, config.reduced_dim)
        .objective;
  }
  return measure(config.kind, primary, mean.mean);
}

double calibrate_threshold(const DetectorConfig& config,
                           const SceneSource& clutter_only) {
  if (!(config.pf > 0.0 && config.pf < 1.0)) {
    throw ConfigError("calibrate_threshold: pf must lie in (0, 1)");
  }
  const double needed = 100.0 / config.pf;
  const int n = config.calibration_trials;
  if (static_cast<double>(n) < needed) {
    throw ConfigError(
        "calibrate_threshold: " + std::to_string(n) +
        " trials cannot pin the pf = " + std::to_string(config.pf) +
        " quantile; need at least " +
        std::to_string(static_cast<long long>(std::ceil(needed))));
  }
  std::vector<double> stats(n);
  for (int t = 0; t < n; ++t) {
    stats[t] = test_statistic(config, clutter_only(static_cast<std::uint64_t>(t)));
  }
  std::sort(stats.begin(), stats.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil((1.0 - config.pf) * static_cast<double>(n)));
  return stats[std::min(rank, stats.size()) - 1];
}

Hypothesis detect(double statistic, double threshold) {
  return statistic > threshold ? Hypothesis::TargetPresent
                               : Hypothesis::ClutterOnly;
}

}  // namespace geodetect
