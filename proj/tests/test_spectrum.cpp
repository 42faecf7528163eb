#include <doctest.h>

#include <cmath>

#include "geodetect/spectrum.hpp"
#include "helpers.hpp"

using namespace geodetect;

TEST_SUITE_BEGIN("spectrum");

namespace {

constexpr MeasureKind kAllKinds[] = {
    MeasureKind::RiemannianDistance, MeasureKind::KullbackLeibler,
    MeasureKind::JensenShannon, MeasureKind::LogDet};

AdjustedSpectrumPoint point_of(const RealVector& lambda, double sigma2, int m) {
  AdjustedSpectrumPoint p;
  p.lambda = lambda;
  p.sigma2 = sigma2;
  p.dim = m;
  return p;
}

}  // namespace

TEST_CASE("whitening spectrum basics") {
  Rng rng(41);
  const HpdMatrix c = testutil::random_hpd(5, rng);
  const WhitenedSpectrum self = whitening_spectrum(c, c);
  for (int i = 0; i < 5; ++i) {
    CHECK(self.values(i) == doctest::Approx(1.0).epsilon(1e-10));
  }

  Matrix d(2, 2);
  d << Complex(4, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0);
  const WhitenedSpectrum s =
      whitening_spectrum(HpdMatrix(d), HpdMatrix(Matrix(Matrix::Identity(2, 2))));
  CHECK(s.values(0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(s.values(1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("scalar potential terms") {
  const double e = std::exp(1.0);
  CHECK(potential_term(MeasureKind::RiemannianDistance, e) ==
        doctest::Approx(1.0).epsilon(1e-12));
  RealVector pair(2);
  pair << e, 1.0 / e;
  CHECK(potential(MeasureKind::RiemannianDistance, pair) ==
        doctest::Approx(2.0).epsilon(1e-12));

  CHECK(potential_term(MeasureKind::KullbackLeibler, 2.0) ==
        doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));

  // ld term vanishes at 1 and is symmetric under inversion
  CHECK(potential_term(MeasureKind::LogDet, 1.0) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(potential_term(MeasureKind::LogDet, 3.0) ==
        doctest::Approx(potential_term(MeasureKind::LogDet, 1.0 / 3.0))
            .epsilon(1e-12));

  RealVector bad(2);
  bad << 1.0, -0.5;
  CHECK_THROWS_AS(potential(MeasureKind::KullbackLeibler, bad), DomainError);
  CHECK_THROWS_AS(potential(MeasureKind::KullbackLeibler, RealVector()),
                  DimensionError);
}

TEST_CASE("matrix and spectrum routes agree") {
  Rng rng(42);
  for (MeasureKind kind : kAllKinds) {
    for (int rep = 0; rep < 4; ++rep) {
      const HpdMatrix c1 = testutil::random_toeplitz_hpd(8, rng);
      const HpdMatrix c2 = testutil::random_toeplitz_hpd(8, rng);
      CHECK(check_equivalence(kind, c1, c2) < 1e-10);
    }
  }
}

TEST_CASE("adjusted potential closed form") {
  // all free coordinates zero: the implied one carries the whole budget
  const int m = 5;
  const double sigma2 = 2.0;  // m*sigma2 = 10
  const double value = adjusted_potential(
      MeasureKind::KullbackLeibler, point_of(RealVector::Zero(m - 1), sigma2, m));
  CHECK(value == doctest::Approx(10.0 - std::log(11.0)).epsilon(1e-12));

  // zero power: the potential vanishes for every kind
  for (MeasureKind kind : kAllKinds) {
    CHECK(adjusted_potential(kind, point_of(RealVector::Zero(3), 0.0, 4)) ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  }
}

TEST_CASE("adjusted potential domain checks") {
  RealVector neg(3);
  neg << 0.5, -0.1, 0.2;
  CHECK_THROWS_AS(
      adjusted_potential(MeasureKind::LogDet, point_of(neg, 1.0, 4)),
      DomainError);

  RealVector heavy(3);
  heavy << 3.0, 3.0, 3.0;  // sum 9 > 4 * 1
  CHECK_THROWS_AS(
      adjusted_potential(MeasureKind::LogDet, point_of(heavy, 1.0, 4)),
      DomainError);

  CHECK_THROWS_AS(
      adjusted_potential(MeasureKind::LogDet,
                         point_of(RealVector::Zero(2), 1.0, 4)),
      DimensionError);
}

TEST_CASE("gradient matches central differences at interior points") {
  Rng rng(43);
  const int m = 6;
  const double sigma2 = 1.3;
  const double budget = m * sigma2;
  for (MeasureKind kind : kAllKinds) {
    for (int rep = 0; rep < 20; ++rep) {
      // random interior point: scale positive draws to half the budget
      RealVector lambda(m - 1);
      double sum = 0.0;
      for (int i = 0; i < m - 1; ++i) {
        lambda(i) = 0.05 + rng.uniform();
        sum += lambda(i);
      }
      lambda *= 0.5 * budget / sum;
      const AdjustedSpectrumPoint p = point_of(lambda, sigma2, m);
      REQUIRE(interior_point(p));

      const RealVector g = adjusted_gradient(kind, p);
      const double h = 1e-6;
      for (int i = 0; i < m - 1; ++i) {
        RealVector up = lambda;
        RealVector dn = lambda;
        up(i) += h;
        dn(i) -= h;
        const double fd = (adjusted_potential(kind, point_of(up, sigma2, m)) -
                           adjusted_potential(kind, point_of(dn, sigma2, m))) /
                          (2.0 * h);
        CHECK(std::abs(g(i) - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("interior point flagging") {
  RealVector lam(3);
  lam << 0.5, 0.5, 0.5;
  CHECK(interior_point(point_of(lam, 1.0, 4)));
  lam << 0.0, 0.5, 0.5;
  CHECK_FALSE(interior_point(point_of(lam, 1.0, 4)));
  lam << 2.0, 1.0, 1.0;  // budget 4: implied coordinate zero
  CHECK_FALSE(interior_point(point_of(lam, 1.0, 4)));
}

TEST_CASE("extremal spectra shapes and tie handling") {
  const ExtremalSpectra s =
      extremal_spectra(MeasureKind::KullbackLeibler, 4, 1.0);
  REQUIRE(s.candidates.size() == 4);
  for (int k = 1; k <= 4; ++k) {
    const ExtremalCandidate& c = s.candidates[k - 1];
    CHECK(c.k == k);
    REQUIRE(c.spectrum.size() == 4);
    CHECK(c.spectrum.sum() == doctest::Approx(4.0).epsilon(1e-12));
    for (int i = 0; i < 4 - k; ++i) {
      CHECK(c.spectrum(i) == 0.0);
    }
    for (int i = 4 - k; i < 4; ++i) {
      CHECK(c.spectrum(i) == doctest::Approx(4.0 / k).epsilon(1e-12));
    }
  }

  // zero power ties every candidate at 0; the tie goes to k = 1
  const ExtremalSpectra flat = extremal_spectra(MeasureKind::LogDet, 4, 0.0);
  CHECK(flat.argmax == 0);
}

TEST_CASE("kld extremal argmax is the single spike") {
  for (double sigma2 : {0.1, 1.0, 10.0}) {
    for (int m : {4, 8, 15}) {
      const ExtremalSpectra s =
          extremal_spectra(MeasureKind::KullbackLeibler, m, sigma2);
      CHECK(s.argmax == 0);
      // and the candidate values strictly decrease in k
      for (std::size_t i = 0; i + 1 < s.candidates.size(); ++i) {
        CHECK(s.candidates[i].value > s.candidates[i + 1].value);
      }
      CHECK(s.candidates[0].value ==
            doctest::Approx(m * sigma2 - std::log(1.0 + m * sigma2))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("rd extremal argmax spreads as power grows") {
  const ExtremalSpectra weak =
      extremal_spectra(MeasureKind::RiemannianDistance, 6, 0.01);
  CHECK(weak.candidates[weak.argmax].k == 1);
  const ExtremalSpectra strong =
      extremal_spectra(MeasureKind::RiemannianDistance, 6, 10.0);
  CHECK(strong.candidates[strong.argmax].k == 6);
}

TEST_CASE("optimal reduced dimension equals the bandwidth") {
  for (int b : {1, 2, 3, 7}) {
    CHECK(optimal_enhancement_dimension(b) == b);
  }
  CHECK_THROWS_AS(optimal_enhancement_dimension(0), DomainError);
}

TEST_CASE("lattice search agrees with the analytic extremum") {
  for (MeasureKind kind : kAllKinds) {
    for (double sigma2 : {0.1, 1.0, 10.0}) {
      const LatticeCheck check = lattice_maximize(kind, 4, sigma2, 20);
      CHECK(check.agrees);
      CHECK(check.lattice_max > 0.0);
    }
  }
  CHECK_THROWS_AS(lattice_maximize(MeasureKind::LogDet, 6, 1.0, 20),
                  DimensionError);
  CHECK_THROWS_AS(lattice_maximize(MeasureKind::LogDet, 4, -1.0, 20),
                  DomainError);
}

TEST_SUITE_END();
