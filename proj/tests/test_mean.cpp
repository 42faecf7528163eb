#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "geodetect/mean.hpp"
#include "helpers.hpp"

using namespace geodetect;
using testutil::rel_err;

TEST_SUITE_BEGIN("mean");

namespace {

MeanConfig config_of(MeasureKind kind) {
  MeanConfig c;
  c.kind = kind;
  return c;
}

std::vector<HpdMatrix> random_members(int count, int m, Rng& rng) {
  std::vector<HpdMatrix> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(testutil::random_hpd(m, rng, 30.0));
  }
  return out;
}

double total_dissimilarity(MeasureKind kind,
                           const std::vector<HpdMatrix>& members,
                           const HpdMatrix& center) {
  double acc = 0.0;
  for (const HpdMatrix& c : members) {
    // kld's harmonic mean minimizes the center-first orientation
    acc += kind == MeasureKind::KullbackLeibler ? measure(kind, center, c)
                                                : measure(kind, c, center);
  }
  return acc;
}

}  // namespace

TEST_CASE("single member passes through") {
  Rng rng(51);
  const HpdMatrix c = testutil::random_hpd(4, rng);
  const MeanResult r = mean_matrix({c}, config_of(MeasureKind::LogDet));
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(rel_err(r.mean.mat(), c.mat()) == 0.0);
}

TEST_CASE("kld mean is the harmonic mean") {
  const HpdMatrix a(Matrix(Matrix::Identity(3, 3)));
  const HpdMatrix b(Matrix(3.0 * Matrix::Identity(3, 3)));
  const MeanResult r = mean_matrix({a, b}, config_of(MeasureKind::KullbackLeibler));
  // ((1 + 1/3)/2)^{-1} = 3/2
  CHECK(rel_err(r.mean.mat(), Matrix(1.5 * Matrix::Identity(3, 3))) < 1e-12);
  CHECK(r.converged);
}

TEST_CASE("kld mean minimizes its objective locally") {
  Rng rng(52);
  const std::vector<HpdMatrix> members = random_members(3, 4, rng);
  const MeanResult r =
      mean_matrix(members, config_of(MeasureKind::KullbackLeibler));
  const double at_mean =
      total_dissimilarity(MeasureKind::KullbackLeibler, members, r.mean);
  CHECK(rel_err(r.objective, at_mean) < 1e-9);
  for (int rep = 0; rep < 6; ++rep) {
    Matrix h = testutil::random_matrix(4, 4, rng);
    h = ((h + h.adjoint()) / 2.0).eval();
    h *= 1e-3 / h.norm();
    const HpdMatrix moved(Matrix(r.mean.mat() + h));
    CHECK(total_dissimilarity(MeasureKind::KullbackLeibler, members, moved) >=
          at_mean - 1e-12);
  }
}

TEST_CASE("rd mean of commuting members is the geometric mean") {
  const HpdMatrix a(Matrix(Matrix::Identity(3, 3)));
  const HpdMatrix b(Matrix(4.0 * Matrix::Identity(3, 3)));
  const MeanResult r =
      mean_matrix({a, b}, config_of(MeasureKind::RiemannianDistance));
  CHECK(r.converged);
  CHECK(rel_err(r.mean.mat(), Matrix(2.0 * Matrix::Identity(3, 3))) < 1e-6);

  Matrix d1(2, 2), d2(2, 2);
  d1 << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(2, 0);
  d2 << Complex(4, 0), Complex(0, 0), Complex(0, 0), Complex(8, 0);
  const MeanResult diag = mean_matrix({HpdMatrix(d1), HpdMatrix(d2)},
                                      config_of(MeasureKind::RiemannianDistance));
  Matrix want(2, 2);
  want << Complex(2, 0), Complex(0, 0), Complex(0, 0), Complex(4, 0);
  CHECK(rel_err(diag.mean.mat(), want) < 1e-6);
}

TEST_CASE("rd mean satisfies the karcher condition") {
  Rng rng(53);
  const std::vector<HpdMatrix> members = random_members(4, 5, rng);
  const MeanResult r =
      mean_matrix(members, config_of(MeasureKind::RiemannianDistance));
  CHECK(r.converged);
  // at the karcher mean the whitened log-sum vanishes
  const Matrix rinv = matrix_function(r.mean, MatrixFunc::InvSqrt).mat();
  Matrix s = Matrix::Zero(5, 5);
  for (const HpdMatrix& c : members) {
    const Matrix w = ((rinv * c.mat() * rinv).eval() +
                      (rinv * c.mat() * rinv).eval().adjoint()) /
                     2.0;
    s += matrix_function(HpdMatrix(w), MatrixFunc::Log).mat();
  }
  CHECK(s.norm() < 1e-6 * static_cast<double>(members.size()));
}

TEST_CASE("ldd mean is a fixed point of its update") {
  Rng rng(54);
  const std::vector<HpdMatrix> members = random_members(4, 5, rng);
  const MeanResult r = mean_matrix(members, config_of(MeasureKind::LogDet));
  CHECK(r.converged);
  Matrix h = Matrix::Zero(5, 5);
  for (const HpdMatrix& c : members) {
    const Matrix mid = ((c.mat() + r.mean.mat()) / 2.0).eval();
    h += matrix_function(HpdMatrix(mid), MatrixFunc::Inverse).mat();
  }
  h /= static_cast<double>(members.size());
  const Matrix updated = matrix_function(HpdMatrix(h), MatrixFunc::Inverse).mat();
  CHECK(rel_err(updated, r.mean.mat()) < 1e-6);
  CHECK(rel_err(r.objective,
                total_dissimilarity(MeasureKind::LogDet, members, r.mean)) <
        1e-9);
}

TEST_CASE("iterative means converge within the budget on random sets") {
  Rng rng(55);
  for (MeasureKind kind :
       {MeasureKind::RiemannianDistance, MeasureKind::LogDet}) {
    for (int rep = 0; rep < 5; ++rep) {
      const std::vector<HpdMatrix> members = random_members(3, 8, rng);
      const MeanResult r = mean_matrix(members, config_of(kind));
      CHECK(r.converged);
      CHECK(r.iterations < 200);
      CHECK(r.final_step < 1e-8);
    }
  }
}

TEST_CASE("mean is permutation invariant") {
  Rng rng(56);
  std::vector<HpdMatrix> members = random_members(5, 4, rng);
  for (MeasureKind kind :
       {MeasureKind::RiemannianDistance, MeasureKind::KullbackLeibler,
        MeasureKind::LogDet}) {
    const MeanResult fwd = mean_matrix(members, config_of(kind));
    std::vector<HpdMatrix> shuffled(members.rbegin(), members.rend());
    std::swap(shuffled[0], shuffled[2]);
    const MeanResult rev = mean_matrix(shuffled, config_of(kind));
    CHECK(rel_err(rev.mean.mat(), fwd.mean.mat()) < 1e-9);
  }
}

TEST_CASE("mean commutes with congruence") {
  Rng rng(57);
  const std::vector<HpdMatrix> members = random_members(3, 4, rng);
  const Matrix w = testutil::random_invertible(4, rng, 16.0);
  for (MeasureKind kind :
       {MeasureKind::RiemannianDistance, MeasureKind::KullbackLeibler,
        MeasureKind::LogDet}) {
    const MeanResult base = mean_matrix(members, config_of(kind));
    std::vector<HpdMatrix> moved;
    for (const HpdMatrix& c : members) {
      moved.emplace_back(Matrix(w.adjoint() * c.mat() * w));
    }
    const MeanResult transformed = mean_matrix(moved, config_of(kind));
    CHECK(rel_err(transformed.mean.mat(),
                  Matrix(w.adjoint() * base.mean.mat() * w)) < 1e-6);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(mean_matrix({}, config_of(MeasureKind::LogDet)),
                  DimensionError);

  Rng rng(58);
  const HpdMatrix a = testutil::random_hpd(3, rng);
  const HpdMatrix b = testutil::random_hpd(4, rng);
  CHECK_THROWS_AS(mean_matrix({a, b}, config_of(MeasureKind::LogDet)),
                  DimensionError);

  MeanConfig bad = config_of(MeasureKind::LogDet);
  bad.max_iterations = 0;
  CHECK_THROWS_AS(mean_matrix({a}, bad), ConfigError);
  bad = config_of(MeasureKind::LogDet);
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(mean_matrix({a}, bad), ConfigError);
}

TEST_SUITE_END();
