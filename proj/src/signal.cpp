#include "geodetect/signal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "geodetect/rng.hpp"

namespace geodetect {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559005768;

void require_snapshot(const Vector& x) {
  if (x.size() < 2) {
    throw DimensionError("snapshot needs at least 2 pulses");
  }
  if (x.norm() == 0.0) {
    throw ZeroSnapshotError("all-zero snapshot");
  }
}

}  // namespace

Vector correlation_lags(const Vector& x, bool normalize) {
  require_snapshot(x);
  const Eigen::Index m = x.size();
  Vector c(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    // dot() conjugates its left argument: sum_j conj(x[j]) x[j+k]
    c(k) = x.head(m - k).dot(x.tail(m - k));
  }
  if (normalize) {
    c /= static_cast<double>(m);
  }
  return c;
}

HpdMatrix toeplitz_covariance(const Vector& x, bool normalize) {
  const Vector c = correlation_lags(x, normalize);
  const Eigen::Index m = c.size();
  Matrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, i) = c(0).real();
    for (Eigen::Index j = i + 1; j < m; ++j) {
      a(i, j) = c(j - i);
      a(j, i) = std::conj(c(j - i));
    }
  }
  return HpdMatrix(a);
}

RealVector dft_power_spectrum(const Vector& x) {
  require_snapshot(x);
  const Eigen::Index m = x.size();
  RealVector p(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double ang = -two_pi * static_cast<double>(k) *
                         static_cast<double>(i) / static_cast<double>(m);
      acc += x(i) * Complex(std::cos(ang), std::sin(ang));
    }
    p(k) = std::norm(acc);
  }
  return p;
}

RealVector spectrum_from_lags(const Vector& lags) {
  const Eigen::Index m = lags.size();
  if (m < 2) {
    throw DimensionError("need at least 2 lags");
  }
  const double c0 = lags(0).real();
  if (!(c0 > 0.0) || std::abs(lags(0).imag()) > 1e-12 * c0) {
    throw DomainError("lag 0 must be real and positive");
  }
  RealVector p(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    double acc = c0;
    for (Eigen::Index t = 1; t < m; ++t) {
      const double ang = -two_pi * static_cast<double>(k) *
                         static_cast<double>(t) / static_cast<double>(m);
      // the tau and -tau terms are conjugates, so only the real part survives
      acc += 2.0 * (lags(t) * Complex(std::cos(ang), std::sin(ang))).real();
    }
    p(k) = acc < 0.0 ? 0.0 : acc;  // powers; small negatives are rounding
  }
  return p;
}

namespace {

Vector draw_process(const ProcessId& process, int m, Rng& rng) {
  Vector x(m);
  switch (process.kind) {
    case ProcessId::Kind::Impulse:
      x.setZero();
      x(0) = Complex(1.0, 0.0);
      return x;
    case ProcessId::Kind::White:
      for (int i = 0; i < m; ++i) {
        x(i) = rng.cnormal();
      }
      return x;
    case ProcessId::Kind::Ar1: {
      const double rho = process.rho;
      if (!(rho >= 0.0 && rho < 1.0)) {
        throw DomainError("ar(1) coefficient must lie in [0, 1)");
      }
      const double innov = std::sqrt(1.0 - rho * rho);
      x(0) = rng.cnormal();
      for (int i = 1; i < m; ++i) {
        x(i) = rho * x(i - 1) + innov * rng.cnormal();
      }
      return x;
    }
  }
  throw Error("unreachable process kind");
}

}  // namespace

double asymptotic_spectrum_gap(const ProcessId& process, int m, int trials,
                               std::uint64_t seed) {
  if (m < 2) {
    throw DimensionError("need at least 2 pulses");
  }
  if (trials < 1) {
    throw DomainError("need at least one trial");
  }
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    const Vector x = draw_process(process, m, rng);
    const HpdMatrix c = toeplitz_covariance(x, false);
    const RealVector lambda = eig_hermitian(c.hermitian()).values;
    RealVector p = dft_power_spectrum(x);
    std::sort(p.data(), p.data() + p.size(), std::greater<double>());
    double gap = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      gap += std::abs(lambda(k) - p(k)) / (p(k) + 1e-12);
    }
    total += gap / static_cast<double>(m);
  }
  return total / static_cast<double>(trials);
}

}  // namespace geodetect
