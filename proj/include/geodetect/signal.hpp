#pragma once

// Snapshot-side model: biased correlation lags, the Toeplitz covariance they
// induce, the discrete power spectrum, and the lag/spectrum duality. All
// indexing is 0-based; lag k correlates x[i] with x[i-k].

#include <cstdint>

#include "geodetect/linalg.hpp"

namespace geodetect {

// c_k = sum_{i>=k} x[i] * conj(x[i-k]); normalize divides by the snapshot
// length. c_0 is real and positive for any nonzero snapshot.
Vector correlation_lags(const Vector& x, bool normalize = true);

// Hermitian Toeplitz matrix with first row (c_0, c_1, ..., c_{m-1}).
// Positive definite for every nonzero snapshot.
HpdMatrix toeplitz_covariance(const Vector& x, bool normalize = true);

// |y_k|^2 with y_k = sum_i x[i] exp(-2*pi*j*k*i/m), k = 0..m-1.
RealVector dft_power_spectrum(const Vector& x);

// Same powers recovered from the lags alone:
//   P_k = c_0 + 2*Re sum_{t=1}^{m-1} c_t exp(-2*pi*j*k*t/m).
// Exact identity with unnormalized lags; scales by 1/m with normalized ones.
RealVector spectrum_from_lags(const Vector& lags);

struct ProcessId {
  enum class Kind { White, Ar1, Impulse };
  Kind kind = Kind::White;
  double rho = 0.0;

  static ProcessId white() { return {Kind::White, 0.0}; }
  static ProcessId ar1(double rho) { return {Kind::Ar1, rho}; }
  static ProcessId impulse() { return {Kind::Impulse, 0.0}; }
};

// Mean over bins of |lambda_k - P_k| / (P_k + 1e-12) with both spectra sorted
// descending, averaged over independent trials. Shrinks with m for smooth
// processes; the impulse snapshot gives exactly zero.
double asymptotic_spectrum_gap(const ProcessId& process, int m, int trials,
                               std::uint64_t seed);

}  // namespace geodetect
