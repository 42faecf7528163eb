#pragma once

// Seedable RNG with hand-rolled samplers. std::normal_distribution and
// std::gamma_distribution are implementation-defined, so golden CSV tests
// would not survive a standard-library change; Box-Muller and Marsaglia-Tsang
// on top of mt19937_64 keep every draw reproducible anywhere.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace geodetect {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

  // Independent stream keyed by (seed, a, b), e.g. (run seed, trial, cell).
  static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return Rng(mix(mix(mix(seed) ^ a) ^ b));
  }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1), safe under log()
  double uniform_open() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal, Box-Muller with one cached variate
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double a = 2.0 * pi * uniform();
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // circular complex normal with unit power, E|z|^2 = 1
  std::complex<double> cnormal() {
    const double s = std::sqrt(0.5);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  // Gamma(shape, scale), Marsaglia-Tsang squeeze
  double gamma(double shape, double scale) {
    if (shape < 1.0) {
      const double u = uniform_open();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      const double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) {
        continue;
      }
      v = v * v * v;
      const double u = uniform_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) {
        return scale * d * v;
      }
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
        return scale * d * v;
      }
    }
  }

 private:
  static constexpr double pi = 3.141592653589793238462643383279502884;

  // splitmix64 finalizer, decorrelates nearby keys
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace geodetect
