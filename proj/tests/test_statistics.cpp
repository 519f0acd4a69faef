// Copyright 2026 The corrgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "corrgraph/core.hpp"
#include "corrgraph/error.hpp"
#include "corrgraph/kernels.hpp"
#include "corrgraph/rng.hpp"
#include "corrgraph/simulation.hpp"
#include "corrgraph/statistics.hpp"

using namespace corrgraph;
using Catch::Approx;

namespace {

Matrix gaussian_matrix(int n, int p, std::uint64_t seed) {
  RandomStream rng(seed, StreamPurpose::Generic);
  Matrix x(n, p);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < p; ++c) x(r, c) = rng.normal();
  return x;
}

// Chain (path) graph model I + rho A.
CorrelationMatrix chain(int p, double rho) {
  Matrix g = Matrix::Identity(p, p);
  for (int i = 0; i + 1 < p; ++i) g(i, i + 1) = g(i + 1, i) = rho;
  return CorrelationMatrix::model(g);
}

// A dense valid correlation matrix: normalized Gram matrix of random vectors.
CorrelationMatrix random_correlation(int p, std::uint64_t seed) {
  const Matrix v = gaussian_matrix(p + 3, p, seed);
  Matrix g = v.transpose() * v;
  const Eigen::VectorXd d = g.diagonal().cwiseSqrt().cwiseInverse();
  g = d.asDiagonal() * g * d.asDiagonal();
  for (int i = 0; i < p; ++i) g(i, i) = 1.0;
  g = 0.5 * (g + g.transpose());
  return CorrelationMatrix::model(g);
}

// Isserlis: E[Zi Zj Zk Zl] for a centered Gaussian with unit variances.
FourthMoments isserlis(const CorrelationMatrix& g) {
  return FourthMoments(g, [&](int i, int j, int k, int l) {
    return g(i, j) * g(k, l) + g(i, k) * g(j, l) + g(i, l) * g(j, k);
  });
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("statistic kinds round-trip through names", "[statistics]") {
  for (StatKind k : kAllStatKinds) CHECK(parse_stat_kind(to_string(k)) == k);
  CHECK_FALSE(parse_stat_kind("pearson").has_value());
}

TEST_CASE("zero correlation gives zero statistics", "[statistics]") {
  Matrix x(4, 3);
  x << 1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, 1;
  const SampleMatrix s(x);
  for (StatKind k : {StatKind::Empirical, StatKind::Student, StatKind::Fisher}) {
    const StatVector t = statistic(s, k);
    REQUIRE(t.size() == 3);
    for (double v : t.values) CHECK(v == Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("transforms at fixed correlations", "[statistics]") {
  CHECK(transform_correlation(StatKind::Fisher, 0.5, 103) == Approx(5.493061443340548457).epsilon(1e-14));
  CHECK(transform_correlation(StatKind::Empirical, 0.5, 100) == Approx(5.0).epsilon(1e-15));
  CHECK(transform_correlation(StatKind::Student, 0.6, 27) == Approx(5.0 * 0.6 / 0.8).epsilon(1e-15));
  // Saturation keeps |r| = 1 finite and rejecting.
  for (StatKind k : {StatKind::Student, StatKind::Fisher}) {
    const double t = transform_correlation(k, 1.0, 50);
    CHECK(std::isfinite(t));
    CHECK(t > 10.0);
    CHECK(transform_correlation(k, -1.0, 50) == -t);
    CHECK(transform_correlation(k, 1.0, 50) == transform_correlation(k, 1.0 - 1e-13, 50));
  }
  CHECK_THROWS_AS(transform_correlation(StatKind::SecondOrder, 0.1, 10), ConfigError);
}

TEST_CASE("second-order statistic matches the direct definition", "[statistics]") {
  const Matrix x = gaussian_matrix(30, 3, 11);
  const StatVector t = statistic(SampleMatrix(x), StatKind::SecondOrder);
  const int n = 30;
  // Brute force: standardize, form every Z_l, then sqrt(n) mean / sd.
  Matrix z = x;
  for (int c = 0; c < 3; ++c) {
    const double mean = z.col(c).mean();
    z.col(c).array() -= mean;
    const double sd = std::sqrt(z.col(c).squaredNorm() / n);
    z.col(c) /= sd;
  }
  std::size_t h = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j, ++h) {
      std::vector<double> prod(n);
      double mean = 0;
      for (int l = 0; l < n; ++l) mean += (prod[l] = z(l, i) * z(l, j));
      mean /= n;
      double var = 0;
      for (int l = 0; l < n; ++l) var += (prod[l] - mean) * (prod[l] - mean);
      var /= n;
      CHECK(t.values[h] == Approx(std::sqrt(double(n)) * mean / std::sqrt(var)).epsilon(1e-12));
    }
  }
}

TEST_CASE("statistics are invariant under positive column scaling", "[statistics][property]") {
  const Matrix x = gaussian_matrix(40, 4, 12);
  Matrix y = x;
  const double scale[] = {3.0, 1e-3, 250.0, 0.7};
  for (int c = 0; c < 4; ++c) y.col(c) = (x.col(c).array() * scale[c] + c).matrix();
  for (StatKind k : kAllStatKinds) {
    const StatVector a = statistic(SampleMatrix(x), k), b = statistic(SampleMatrix(y), k);
    for (std::size_t h = 0; h < a.size(); ++h) CHECK(a.values[h] == Approx(b.values[h]).margin(1e-10));
  }
}

TEST_CASE("p-values", "[statistics]") {
  StatVector t{StatKind::Empirical, {0.0, 1.959964, -1.959964, 3.0}, 10};
  const PValueVector p = p_values(t);
  CHECK(p.values[0] == 1.0);
  CHECK(p.values[1] == Approx(0.05).margin(1e-6));
  CHECK(p.values[2] == p.values[1]);
  CHECK(p.values[3] == Approx(0.0026998).margin(1e-6));
  double prev = 2.0;
  for (double x = 0.0; x < 38.0; x += 0.25) {
    const double v = p_values({StatKind::Empirical, {x}, 10}).values[0];
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("constant second-order product variance is degenerate", "[statistics]") {
  // Z_l = Y1 Y2 is constant when both columns are the same +-1 sequence.
  Matrix x(6, 2);
  x << 1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1;
  CHECK_THROWS_AS(statistic(SampleMatrix(x), StatKind::SecondOrder), DegenerateInputError);
}

TEST_CASE("Gaussian covariance collapses to the identity at Gamma = I", "[statistics]") {
  for (int p : {3, 10, 26}) {
    const auto m = static_cast<Eigen::Index>(pair_count(p));
    for (StatKind k : kAllStatKinds) {
      const PairCovariance o = omega_gaussian(CorrelationMatrix::identity(p), k);
      CHECK(max_abs_diff(o.values, Matrix::Identity(m, m)) <= 1e-12);
      CHECK(o.source == CovarianceSource::GaussianClosedForm);
    }
  }
}

TEST_CASE("Gaussian covariance hand values at p = 3", "[statistics]") {
  Matrix g = Matrix::Identity(3, 3);
  g(0, 1) = g(1, 0) = 0.2;
  const CorrelationMatrix gamma(g);
  const Matrix o1 = omega_gaussian(gamma, StatKind::Empirical).values;
  // Pairs in order: (1,2), (1,3), (2,3).
  CHECK(o1(0, 0) == Approx(0.9216).epsilon(1e-14));
  CHECK(o1(1, 2) == Approx(0.2).epsilon(1e-14));
  CHECK(o1(1, 1) == 1.0);
  CHECK(o1(2, 2) == 1.0);
  const Matrix o4 = omega_gaussian(gamma, StatKind::SecondOrder).values;
  CHECK(o4(0, 0) == Approx(1.0).epsilon(1e-15));
  const Matrix o2 = omega_gaussian(gamma, StatKind::Student).values;
  CHECK(o2(0, 0) == Approx(0.9216 / std::pow(0.96, 3)).epsilon(1e-14));
  const Matrix o3 = omega_gaussian(gamma, StatKind::Fisher).values;
  CHECK(o3(0, 0) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("closed forms match the general formula under Isserlis moments", "[statistics]") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const CorrelationMatrix g = random_correlation(6, seed);
    const FourthMoments mu = isserlis(g);
    for (StatKind k : kAllStatKinds) {
      INFO("kind " << to_string(k) << " seed " << seed);
      const Matrix closed = omega_gaussian(g, k).values;
      const Matrix general = omega_general(mu, k).values;
      CHECK(max_abs_diff(closed, general) <= 1e-10);
    }
  }
}

TEST_CASE("covariances are symmetric with unit null diagonal", "[statistics][property]") {
  const CorrelationMatrix g = chain(8, 0.3);
  for (StatKind k : kAllStatKinds) {
    const Matrix o = omega_gaussian(g, k).values;
    CHECK(max_abs_diff(o, o.transpose()) == 0.0);
    const auto pairs = enumerate_pairs(8);
    for (std::size_t h = 0; h < pairs.size(); ++h)
      if (g(pairs[h].i, pairs[h].j) == 0.0) CHECK(o(h, h) == 1.0);
  }
}

TEST_CASE("Student and Fisher covariances are singular at |rho| = 1", "[statistics]") {
  Matrix g = Matrix::Identity(3, 3);
  g(0, 1) = g(1, 0) = 1.0;
  const CorrelationMatrix gamma(g);
  CHECK_THROWS_AS(omega_gaussian(gamma, StatKind::Student), SingularityError);
  CHECK_THROWS_AS(omega_gaussian(gamma, StatKind::Fisher), SingularityError);
  CHECK_NOTHROW(omega_gaussian(gamma, StatKind::Empirical));
  CHECK_NOTHROW(omega_gaussian(saturated(gamma), StatKind::Fisher));
}

TEST_CASE("covariance fill does not depend on the thread count", "[statistics]") {
  const CorrelationMatrix g = random_correlation(10, 5);
  for (StatKind k : kAllStatKinds)
    CHECK(omega_gaussian(g, k, 1).values == omega_gaussian(g, k, 3).values);
}

TEST_CASE("fourth moments", "[statistics]") {
  Matrix pm(8, 1);
  pm << 1, -1, 1, -1, -1, 1, -1, 1;
  Matrix two(8, 2);
  two.col(0) = pm.col(0);
  two.col(1) = gaussian_matrix(8, 1, 4).col(0);
  const FourthMoments r = fourth_moments(SampleMatrix(two));
  CHECK(r(0, 0, 0, 0) == Approx(1.0).epsilon(1e-14));
  CHECK(r.stored() == 5);  // C(5, 4)

  Matrix x(6, 2);
  x << 1, 4, 2, 0, 5, 3, 3, 3, 7, 1, 0, 2;
  const FourthMoments f = fourth_moments(SampleMatrix(x));
  // Brute force rho_1122 on centered, divisor-n scaled columns.
  Eigen::VectorXd a = x.col(0).array() - x.col(0).mean();
  Eigen::VectorXd b = x.col(1).array() - x.col(1).mean();
  a /= std::sqrt(a.squaredNorm() / 6);
  b /= std::sqrt(b.squaredNorm() / 6);
  double expected = 0;
  for (int l = 0; l < 6; ++l) expected += a(l) * a(l) * b(l) * b(l);
  expected /= 6;
  CHECK(f(0, 0, 1, 1) == Approx(expected).epsilon(1e-13));
  CHECK(f(1, 0, 1, 0) == f(0, 0, 1, 1));
  CHECK(f(0, 0, 0, 0) >= 1.0);

  const FourthMoments big = fourth_moments(SampleMatrix(gaussian_matrix(100000, 3, 6)));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(big(i, i, i, i) - 3.0) < 0.2);
  const Matrix o = omega_general(big, StatKind::Empirical).values;
  CHECK(max_abs_diff(o, Matrix::Identity(3, 3)) < 0.05);
  CHECK(max_abs_diff(o, o.transpose()) == 0.0);
}

TEST_CASE("scalar and AVX2 paths give the same statistics", "[statistics][kernels]") {
  if (!kernels::avx2_available()) SKIP("AVX2 not available on this machine");
  const SampleMatrix s(gaussian_matrix(257, 7, 8));
  const auto before = kernels::active().isa;
  kernels::set_active(kernels::Isa::Scalar);
  std::vector<StatVector> ref;
  for (StatKind k : kAllStatKinds) ref.push_back(statistic(s, k));
  const FourthMoments mu_ref = fourth_moments(s);
  kernels::set_active(kernels::Isa::Avx2);
  for (std::size_t q = 0; q < ref.size(); ++q) {
    const StatVector v = statistic(s, kAllStatKinds[q]);
    for (std::size_t h = 0; h < v.size(); ++h) CHECK(v.values[h] == Approx(ref[q].values[h]).margin(1e-12));
  }
  const FourthMoments mu = fourth_moments(s);
  CHECK(mu(0, 1, 2, 3) == Approx(mu_ref(0, 1, 2, 3)).margin(1e-12));
  kernels::set_active(before);
}

TEST_CASE("Monte Carlo covariance of empirical correlations at a chain model", "[statistics][mc]") {
  // Smaller than the acceptance run; checks the same identity.
  const CorrelationMatrix g = chain(4, 0.2);
  const Matrix omega = omega_gaussian(g, StatKind::Empirical).values;
  const int reps = 1500, n = 2000;
  const auto truth = g.pair_values();
  Matrix acc = Matrix::Zero(6, 6);
  for (int r = 0; r < reps; ++r) {
    const SampleMatrix s = sample_gaussian(g, n, derive_seed(99, {static_cast<std::uint64_t>(r)}));
    const auto est = empirical_correlation(s).pair_values();
    Eigen::VectorXd d(6);
    for (int h = 0; h < 6; ++h) d(h) = std::sqrt(double(n)) * (est[h] - truth[h]);
    acc += d * d.transpose();
  }
  acc /= reps;
  CHECK(max_abs_diff(acc, omega) < 0.1);
}
