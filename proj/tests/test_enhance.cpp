#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "geodetect/enhance.hpp"
#include "helpers.hpp"

using namespace geodetect;
using testutil::rel_err;

TEST_SUITE_BEGIN("enhance");

namespace {

constexpr MeasureKind kKinds[] = {MeasureKind::RiemannianDistance,
                                  MeasureKind::KullbackLeibler,
                                  MeasureKind::LogDet};

WhitenedSpectrum spectrum_of(std::initializer_list<double> values) {
  WhitenedSpectrum s;
  s.values.resize(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) {
    s.values(i++) = v;
  }
  return s;
}

}  // namespace

TEST_CASE("interlacing intervals") {
  const WhitenedSpectrum s = spectrum_of({4.0, 3.0, 0.5, 0.25});
  const std::vector<Interval> iv = interlace_bounds(s, 2);
  REQUIRE(iv.size() == 2);
  CHECK(iv[0].lower == 0.5);
  CHECK(iv[0].upper == 4.0);
  CHECK(iv[1].lower == 0.25);
  CHECK(iv[1].upper == 3.0);

  CHECK_THROWS_AS(interlace_bounds(s, 0), DomainError);
  CHECK_THROWS_AS(interlace_bounds(s, 3), DomainError);  // 2n > m
}

TEST_CASE("optimal reduced spectrum picks endpoint maxima") {
  const WhitenedSpectrum s = spectrum_of({4.0, 3.0, 0.5, 0.25});
  // kld: 4 beats 0.5 (1.614 > 0.193) and 3 beats 0.25 (0.901 > 0.636)
  const RealVector kld =
      optimal_reduced_spectrum(MeasureKind::KullbackLeibler, s, 2);
  CHECK(kld(0) == 4.0);
  CHECK(kld(1) == 3.0);

  // rd on [0.25, 3]: log^2(0.25) = 1.92 beats log^2(3) = 1.21
  const WhitenedSpectrum t = spectrum_of({3.0, 1.0, 0.5, 0.25});
  const RealVector rd =
      optimal_reduced_spectrum(MeasureKind::RiemannianDistance, t, 1);
  CHECK(rd(0) == 0.25);
}

TEST_CASE("tie resolution takes the larger endpoint") {
  const WhitenedSpectrum sym = spectrum_of({3.0, 1.0, 1.0, 1.0 / 3.0});
  const RealVector mu =
      optimal_reduced_spectrum(MeasureKind::RiemannianDistance, sym, 1);
  CHECK(mu(0) == 3.0);  // log^2 ties at both ends of [1/3, 3]
}

TEST_CASE("reduction basis reproduces the requested spectrum") {
  // m = 2, n = 1, whitened diag(4, 1), mu = 2.5 -> mixing weight t = 0.5
  Matrix d(2, 2);
  d << Complex(4, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0);
  const EigenDecomposition e = eig_hermitian(HermitianMatrix(d));
  RealVector mu(1);
  mu << 2.5;
  const Matrix q = reduction_basis(e, mu);
  CHECK(q.rows() == 2);
  CHECK(q.cols() == 1);
  CHECK(std::abs((q.adjoint() * q)(0, 0).real() - 1.0) < 1e-12);
  const Complex quad = (q.adjoint() * d * q)(0, 0);
  CHECK(quad.real() == doctest::Approx(2.5).epsilon(1e-12));

  RealVector outside(1);
  outside << 5.0;
  CHECK_THROWS_AS(reduction_basis(e, outside), DomainError);
}

TEST_CASE("degenerate interval defaults to the top eigenvector") {
  Matrix d = Matrix::Identity(2, 2);
  const EigenDecomposition e = eig_hermitian(HermitianMatrix(d));
  RealVector mu(1);
  mu << 1.0;
  const Matrix q = reduction_basis(e, mu);
  CHECK(rel_err(q, Matrix(e.vectors.col(0))) < 1e-12);
}

TEST_CASE("diagonal end-to-end enhancement") {
  Matrix c1(4, 4);
  c1.setZero();
  c1.diagonal() << Complex(4, 0), Complex(3, 0), Complex(0.5, 0),
      Complex(0.25, 0);
  const HpdMatrix a(c1);
  const HpdMatrix i4(Matrix(Matrix::Identity(4, 4)));
  const EnhancementResult r =
      enhanced_mapping(MeasureKind::KullbackLeibler, a, i4, 2);
  CHECK(r.n == 2);
  CHECK(r.spectrum(0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(r.spectrum(1) == doctest::Approx(3.0).epsilon(1e-12));
  const double want = (4.0 - 1.0 - std::log(4.0)) + (3.0 - 1.0 - std::log(3.0));
  CHECK(r.objective == doctest::Approx(want).epsilon(1e-12));  // about 2.515
}

TEST_CASE("mapping reproduces the optimal reduced spectrum") {
  Rng rng(61);
  for (MeasureKind kind : kKinds) {
    for (int n : {2, 4}) {
      const HpdMatrix c1 = testutil::random_toeplitz_hpd(8, rng);
      const HpdMatrix c2 = testutil::random_toeplitz_hpd(8, rng);
      const EnhancementResult r = enhanced_mapping(kind, c1, c2, n);

      // spectrum is descending
      for (int i = 0; i + 1 < n; ++i) {
        CHECK(r.spectrum(i) >= r.spectrum(i + 1) - 1e-12);
      }

      // the compressed pair has exactly that whitening spectrum
      const HpdMatrix p1(Matrix(r.mapping.adjoint() * c1.mat() * r.mapping));
      const HpdMatrix p2(Matrix(r.mapping.adjoint() * c2.mat() * r.mapping));
      const WhitenedSpectrum reduced = whitening_spectrum(p1, p2);
      for (int i = 0; i < n; ++i) {
        CHECK(rel_err(reduced.values(i), r.spectrum(i)) < 1e-8);
      }

      // and the reported objective is that spectrum's potential
      CHECK(rel_err(enhanced_measure(kind, c1, c2, r.mapping), r.objective) <
            1e-8);
    }
  }
}

TEST_CASE("closed form dominates random projections") {
  Rng rng(62);
  for (MeasureKind kind : kKinds) {
    for (int n : {2, 3}) {
      const HpdMatrix c1 = testutil::random_toeplitz_hpd(6, rng);
      const HpdMatrix c2 = testutil::random_toeplitz_hpd(6, rng);
      const double best = enhanced_mapping(kind, c1, c2, n).objective;
      for (int rep = 0; rep < 300; ++rep) {
        const Matrix w = testutil::random_matrix(6, n, rng);
        const double sampled = enhanced_measure(kind, c1, c2, w);
        CHECK(sampled <= best + 1e-6 * std::max(1.0, best));
      }
    }
  }
}

TEST_CASE("reduced measure never exceeds the full measure") {
  Rng rng(63);
  for (MeasureKind kind : kKinds) {
    const HpdMatrix c1 = testutil::random_toeplitz_hpd(8, rng);
    const HpdMatrix c2 = testutil::random_toeplitz_hpd(8, rng);
    const double full = measure(kind, c1, c2);
    for (int n : {1, 2, 3, 4}) {
      const double reduced = enhanced_mapping(kind, c1, c2, n).objective;
      CHECK(reduced <= full + 1e-9 * std::max(1.0, full));
    }
  }
}

TEST_CASE("enhanced measure validates its projection") {
  Rng rng(64);
  const HpdMatrix c1 = testutil::random_hpd(5, rng);
  const HpdMatrix c2 = testutil::random_hpd(5, rng);
  Matrix w = testutil::random_matrix(5, 2, rng);
  w.col(1) = w.col(0);
  CHECK_THROWS_AS(enhanced_measure(MeasureKind::LogDet, c1, c2, w), RankError);

  CHECK_THROWS_AS(
      enhanced_measure(MeasureKind::LogDet, c1, c2, Matrix(3, 2)),
      DimensionError);

  CHECK_THROWS_AS(enhanced_mapping(MeasureKind::LogDet, c1, c2, 3),
                  DomainError);  // 2n > m
  CHECK_THROWS_AS(enhanced_mapping(MeasureKind::LogDet, c1, c2, 0),
                  DomainError);
}

TEST_SUITE_END();
