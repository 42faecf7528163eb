#pragma once

// Scene simulation: compound-Gaussian clutter (gamma texture times a complex
// Gaussian speckle), deterministic Doppler and bandlimited target templates,
// and per-(seed, trial, cell) stream derivation so any cell of any trial can
// be regenerated in isolation.

#include <cstdint>
#include <string>
#include <vector>

#include "geodetect/linalg.hpp"
#include "geodetect/rng.hpp"

namespace geodetect {

enum class Hypothesis { ClutterOnly, TargetPresent };

struct KClutterParams {
  double shape = 1.0;        // gamma texture shape
  double scale = 0.5;        // gamma texture scale
  double speckle_ar1 = 0.0;  // lag-1 coefficient of the speckle, in [0, 1)
};

// Mean clutter power per pulse, E[tau] * E|u|^2 = shape * scale.
double clutter_mean_power(const KClutterParams& params);

// One snapshot: x = sqrt(tau) * u with tau ~ Gamma(shape, scale) drawn once
// per snapshot and u a stationary unit-power AR(1) speckle.
Vector generate_clutter(const KClutterParams& params, int num_pulses, Rng& rng);

// Covariance of the unit-power speckle process above: entries ar1^|i-j|.
// Scaling by a texture draw gives the conditional covariance of one snapshot.
HpdMatrix speckle_covariance(const KClutterParams& params, int num_pulses);

struct TargetSpec {
  enum class Kind { Doppler, Bandlimited };
  Kind kind = Kind::Doppler;
  double amplitude = 1.0;
  double doppler_hz = 135.0;  // Doppler targets; must satisfy |f| < prf/2
  int bandwidth = 1;          // bandlimited targets: occupied trailing bins
};

// Deterministic template. Doppler: amplitude * exp(2*pi*j*f*i/prf), constant
// modulus. A bandlimited target spreads weight 1/sqrt(bandwidth) over the
// trailing DFT bins through the unitary inverse transform. Raw norms differ
// (m*amplitude^2 vs amplitude^2); scale_to_scr makes them comparable.
Vector generate_target(const TargetSpec& spec, int num_pulses, double prf_hz);

// Rescales s so that (||s||^2 / m) / clutter_power == 10^(scr_db/10).
Vector scale_to_scr(const Vector& target, double clutter_power, double scr_db);

struct Scenario {
  int num_cells = 17;
  int num_pulses = 15;
  int target_cell = 9;  // 1-based index into the cell line
  double pf = 1e-2;
  double prf_hz = 1000.0;
  KClutterParams clutter;
  TargetSpec target;
  std::vector<double> scr_grid_db;
  std::uint64_t seed = 1;
};

// Throws ConfigError when the scenario is internally inconsistent.
void validate_scenario(const Scenario& scenario);

struct Scene {
  Vector primary;                  // cell under test
  std::vector<Vector> secondary;   // reference cells, target-free
};

// Builds one trial: every cell gets independent clutter from the stream
// keyed (seed, trial, cell); under TargetPresent the target template scaled
// to scr_db is added to the primary. Cells within guard_cells of the target
// cell are dropped from the secondary set.
Scene generate_scene(const Scenario& scenario, Hypothesis hypothesis,
                     double scr_db, std::uint64_t trial, int guard_cells = 0);

}  // namespace geodetect
