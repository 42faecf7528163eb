#include "geodetect/sim.hpp"

#include <cmath>
#include <string>

namespace geodetect {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559005768;

}  // namespace

double clutter_mean_power(const KClutterParams& params) {
  return params.shape * params.scale;
}

Vector generate_clutter(const KClutterParams& params, int num_pulses,
                        Rng& rng) {
  if (num_pulses < 2) {
    throw DimensionError("generate_clutter: need at least 2 pulses");
  }
  if (!(params.shape > 0.0) || !(params.scale > 0.0)) {
    throw DomainError("generate_clutter: gamma texture needs shape, scale > 0");
  }
  const double rho = params.speckle_ar1;
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw DomainError("generate_clutter: speckle ar(1) must lie in [0, 1)");
  }
  // one texture draw per snapshot: the texture is constant over the CPI
  const double amp = std::sqrt(rng.gamma(params.shape, params.scale));
  const double innov = std::sqrt(1.0 - rho * rho);
  Vector x(num_pulses);
  Complex u = rng.cnormal();
  x(0) = amp * u;
  for (int i = 1; i < num_pulses; ++i) {
    u = rho * u + innov * rng.cnormal();
    x(i) = amp * u;
  }
  return x;
}

HpdMatrix speckle_covariance(const KClutterParams& params, int num_pulses) {
  if (num_pulses < 2) {
    throw DimensionError("speckle_covariance: need at least 2 pulses");
  }
  const double rho = params.speckle_ar1;
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw DomainError("speckle_covariance: speckle ar(1) must lie in [0, 1)");
  }
  Matrix c(num_pulses, num_pulses);
  for (int i = 0; i < num_pulses; ++i) {
    for (int j = 0; j < num_pulses; ++j) {
      c(i, j) = std::pow(rho, std::abs(i - j));
    }
  }
  return HpdMatrix(c);
}

Vector generate_target(const TargetSpec& spec, int num_pulses, double prf_hz) {
  if (num_pulses < 2) {
    throw DimensionError("generate_target: need at least 2 pulses");
  }
  if (!(prf_hz > 0.0)) {
    throw DomainError("generate_target: prf must be > 0");
  }
  Vector s(num_pulses);
  switch (spec.kind) {
    case TargetSpec::Kind::Doppler: {
      if (!(std::abs(spec.doppler_hz) < prf_hz / 2.0)) {
        throw DomainError("generate_target: doppler must satisfy |f| < prf/2");
      }
      const double w = two_pi * spec.doppler_hz / prf_hz;
      for (int i = 0; i < num_pulses; ++i) {
        s(i) = spec.amplitude * Complex(std::cos(w * i), std::sin(w * i));
      }
      return s;
    }
    case TargetSpec::Kind::Bandlimited: {
      const int b = spec.bandwidth;
      if (b < 1 || b > num_pulses) {
        throw DomainError("generate_target: bandwidth must lie in [1, m]");
      }
      // unit weight 1/sqrt(b) on the b trailing bins, unitary inverse DFT;
      // Parseval keeps ||s||^2 = amplitude^2
      const double m = static_cast<double>(num_pulses);
      const double w0 = 1.0 / std::sqrt(static_cast<double>(b));
      for (int i = 0; i < num_pulses; ++i) {
        Complex acc(0.0, 0.0);
        for (int k = num_pulses - b; k < num_pulses; ++k) {
          const double ang = two_pi * static_cast<double>(k) *
                             static_cast<double>(i) / m;
          acc += Complex(std::cos(ang), std::sin(ang));
        }
        s(i) = spec.amplitude * w0 * acc / std::sqrt(m);
      }
      return s;
    }
  }
  throw Error("unreachable target kind");
}

Vector scale_to_scr(const Vector& target, double clutter_power, double scr_db) {
  if (!(clutter_power > 0.0)) {
    throw DomainError("scale_to_scr: clutter power must be > 0");
  }
  const double per_pulse =
      target.squaredNorm() / static_cast<double>(target.size());
  if (!(per_pulse > 0.0)) {
    throw ZeroSnapshotError("scale_to_scr: zero target template");
  }
  const double want = std::pow(10.0, scr_db / 10.0) * clutter_power;
  return target * std::sqrt(want / per_pulse);
}

void validate_scenario(const Scenario& scenario) {
  if (scenario.num_pulses < 2) {
    throw ConfigError("scenario: num_pulses must be >= 2");
  }
  if (scenario.num_cells < 2) {
    throw ConfigError("scenario: num_cells must be >= 2");
  }
  if (scenario.target_cell < 1 || scenario.target_cell > scenario.num_cells) {
    throw ConfigError("scenario: target_cell must lie in [1, num_cells]");
  }
  if (!(scenario.pf > 0.0 && scenario.pf < 1.0)) {
    throw ConfigError("scenario: pf must lie in (0, 1)");
  }
  if (!(scenario.prf_hz > 0.0)) {
    throw ConfigError("scenario: prf_hz must be > 0");
  }
  if (!(scenario.clutter.shape > 0.0) || !(scenario.clutter.scale > 0.0)) {
    throw ConfigError("scenario: clutter shape and scale must be > 0");
  }
  if (!(scenario.clutter.speckle_ar1 >= 0.0 &&
        scenario.clutter.speckle_ar1 < 1.0)) {
    throw ConfigError("scenario: speckle_ar1 must lie in [0, 1)");
  }
  if (scenario.target.kind == TargetSpec::Kind::Doppler &&
      !(std::abs(scenario.target.doppler_hz) < scenario.prf_hz / 2.0)) {
    throw ConfigError("scenario: doppler_hz must satisfy |f| < prf/2");
  }
  if (scenario.target.kind == TargetSpec::Kind::Bandlimited &&
      (scenario.target.bandwidth < 1 ||
       scenario.target.bandwidth > scenario.num_pulses)) {
    throw ConfigError("scenario: bandwidth must lie in [1, num_pulses]");
  }
  if (!(scenario.target.amplitude > 0.0)) {
    throw ConfigError("scenario: target amplitude must be > 0");
  }
}

Scene generate_scene(const Scenario& scenario, Hypothesis hypothesis,
                     double scr_db, std::uint64_t trial, int guard_cells) {
  validate_scenario(scenario);
  if (guard_cells < 0) {
    throw ConfigError("generate_scene: guard_cells must be >= 0");
  }
  const int reach = guard_cells + 1;  // cells closer than this are excluded
  int usable = 0;
  for (int cell = 1; cell <= scenario.num_cells; ++cell) {
    if (std::abs(cell - scenario.target_cell) >= reach) {
      ++usable;
    }
  }
  if (usable < 1) {
    throw ConfigError("generate_scene: guard band leaves no secondary cells");
  }

  Scene scene;
  scene.secondary.reserve(usable);
  for (int cell = 1; cell <= scenario.num_cells; ++cell) {
    Rng rng = Rng::stream(scenario.seed, trial, static_cast<std::uint64_t>(cell));
    Vector x = generate_clutter(scenario.clutter, scenario.num_pulses, rng);
    if (cell == scenario.target_cell) {
      if (hypothesis == Hypothesis::TargetPresent) {
        const Vector s = scale_to_scr(
            generate_target(scenario.target, scenario.num_pulses,
                            scenario.prf_hz),
            clutter_mean_power(scenario.clutter), scr_db);
        x += s;
      }
      scene.primary = std::move(x);
    } else if (std::abs(cell - scenario.target_cell) >= reach) {
      scene.secondary.push_back(std::move(x));
    }
  }
  return scene;
}

}  // namespace geodetect
