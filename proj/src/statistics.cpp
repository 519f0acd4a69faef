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

#include "corrgraph/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "corrgraph/error.hpp"
#include "corrgraph/kernels.hpp"
#include "corrgraph/normal.hpp"
#include "corrgraph/parallel.hpp"

namespace corrgraph {

std::string_view to_string(StatKind kind) {
  switch (kind) {
    case StatKind::Empirical:
      return "empirical";
    case StatKind::Student:
      return "student";
    case StatKind::Fisher:
      return "fisher";
    case StatKind::SecondOrder:
      return "secondorder";
  }
  return "unknown";
}

std::optional<StatKind> parse_stat_kind(std::string_view name) {
  for (StatKind k : kAllStatKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

double transform_correlation(StatKind kind, double r, int n) {
  const double nd = static_cast<double>(n);
  switch (kind) {
    case StatKind::Empirical:
      return std::sqrt(nd) * r;
    case StatKind::Student: {
      const double s = std::clamp(r, -kSaturation, kSaturation);
      return std::sqrt(nd - 2.0) * s / std::sqrt((1.0 - s) * (1.0 + s));
    }
    case StatKind::Fisher: {
      const double s = std::clamp(r, -kSaturation, kSaturation);
      return std::sqrt(nd - 3.0) * std::atanh(s);
    }
    case StatKind::SecondOrder:
      break;
  }
  throw ConfigError("the second-order statistic is not a function of the correlation alone");
}

StatVector statistic_from_correlation(const CorrelationMatrix& r, StatKind kind, int n) {
  if (n < kMinObservations) {
    throw DegenerateInputError("at least " + std::to_string(kMinObservations) +
                               " observations are required, got " + std::to_string(n));
  }
  StatVector out{kind, r.pair_values(), n};
  for (double& v : out.values) v = transform_correlation(kind, v, n);
  return out;
}

CorrelationMatrix saturated(const CorrelationMatrix& r) {
  Matrix v = r.values();
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j)
      if (i != j) v(i, j) = std::clamp(v(i, j), -kSaturation, kSaturation);
  return CorrelationMatrix(std::move(v));
}

ProductMoments product_moments(const SampleMatrix& samples) {
  return centered_product_moments(standardize(samples).data());
}

ProductMoments centered_product_moments(const Matrix& data) {
  const CenteredColumns centered = center_columns(data);
  const Matrix& z = centered.values;
  const auto p = static_cast<int>(z.cols());
  const auto n = static_cast<std::size_t>(z.rows());
  const double nd = static_cast<double>(n);
  const auto& k = kernels::active();
  ProductMoments out;
  out.mean.reserve(pair_count(p));
  out.variance.reserve(pair_count(p));
  for (int i = 0; i < p; ++i) {
    const double* ci = z.col(i).data();
    for (int j = i + 1; j < p; ++j) {
      const double* cj = z.col(j).data();
      const double mean = k.dot(ci, cj, n) / nd;
      const double second = k.dot_sq(ci, cj, n) / nd;
      const double var = second - mean * mean;
      if (!(var > 1e-14 * second)) {
        throw DegenerateInputError("product of columns " + std::to_string(i + 1) + " and " +
                                       std::to_string(j + 1) + " has zero variance",
                                   static_cast<std::ptrdiff_t>(j));
      }
      out.mean.push_back(mean);
      out.variance.push_back(var);
    }
  }
  return out;
}

StatVector statistic(const SampleMatrix& samples, StatKind kind) {
  const int n = samples.n();
  if (n < kMinObservations) {
    throw DegenerateInputError("at least " + std::to_string(kMinObservations) +
                               " observations are required, got " + std::to_string(n));
  }
  if (kind != StatKind::SecondOrder) {
    return statistic_from_correlation(empirical_correlation(samples), kind, n);
  }
  const ProductMoments pm = product_moments(samples);
  StatVector out{kind, std::vector<double>(pm.mean.size()), n};
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  for (std::size_t h = 0; h < pm.mean.size(); ++h)
    out.values[h] = sqrt_n * pm.mean[h] / std::sqrt(pm.variance[h]);
  return out;
}

PValueVector p_values(const StatVector& stats) {
  PValueVector out{std::vector<double>(stats.size())};
  for (std::size_t h = 0; h < stats.size(); ++h) out.values[h] = two_sided_p_value(stats.values[h]);
  return out;
}

namespace {

// Gaussian covariance of sqrt(n)(r_ij - rho_ij, r_kl - rho_kl).
double omega_empirical_gaussian(const Matrix& g, PairIndex a, PairIndex b) {
  if (a == b) {
    const double r = g(a.i, a.j);
    return (1.0 - r * r) * (1.0 - r * r);
  }
  const int shared = (a.i == b.i) + (a.i == b.j) + (a.j == b.i) + (a.j == b.j);
  if (shared == 1) {
    // Rewrite as (c, x), (c, y) with the common variable c first; the
    // covariance does not depend on the order inside a pair.
    const int c = (a.i == b.i || a.i == b.j) ? a.i : a.j;
    const int x = (a.i == c) ? a.j : a.i;
    const int y = (b.i == c) ? b.j : b.i;
    const double rcx = g(c, x), rcy = g(c, y), rxy = g(x, y);
    return -0.5 * rcx * rcy * (1.0 - rcx * rcx - rcy * rcy - rxy * rxy) +
           rxy * (1.0 - rcx * rcx - rcy * rcy);
  }
  const int i = a.i, j = a.j, k = b.i, l = b.j;
  const double rij = g(i, j), rkl = g(k, l), rik = g(i, k), ril = g(i, l), rjk = g(j, k),
               rjl = g(j, l);
  return 0.5 * rij * rkl * (rik * rik + ril * ril + rjk * rjk + rjl * rjl) + rik * rjl +
         ril * rjk - rik * rjk * rkl - rij * rik * ril - rij * rjk * rjl - ril * rjl * rkl;
}

double one_minus_sq(double r, StatKind kind) {
  const double v = (1.0 - r) * (1.0 + r);
  if (!(v > 0.0)) {
    throw SingularityError(std::string("covariance of the ") + std::string(to_string(kind)) +
                           " statistic is undefined at |rho| = 1");
  }
  return v;
}

// Delta-method rescaling of the correlation covariance.
double rescale(StatKind kind, double omega, double rij, double rkl) {
  switch (kind) {
    case StatKind::Student:
      return omega / std::pow(one_minus_sq(rij, kind) * one_minus_sq(rkl, kind), 1.5);
    case StatKind::Fisher:
      return omega / (one_minus_sq(rij, kind) * one_minus_sq(rkl, kind));
    default:
      return omega;
  }
}

template <class Entry>
Matrix fill_symmetric(int p, int threads, Entry entry) {
  const auto pairs = enumerate_pairs(p);
  const std::size_t m = pairs.size();
  Matrix out(m, m);
  parallel_for(m, threads, [&](std::size_t r) {
    for (std::size_t c = r; c < m; ++c) out(r, c) = entry(pairs[r], pairs[c]);
  });
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < r; ++c) out(r, c) = out(c, r);
  return out;
}

}  // namespace

PairCovariance omega_gaussian(const CorrelationMatrix& gamma, StatKind kind, int threads) {
  const Matrix& g = gamma.values();
  if (kind == StatKind::Student || kind == StatKind::Fisher) {
    for (int i = 0; i < gamma.p(); ++i)
      for (int j = i + 1; j < gamma.p(); ++j) one_minus_sq(g(i, j), kind);
  }
  Matrix values = fill_symmetric(gamma.p(), threads, [&](PairIndex a, PairIndex b) {
    if (kind == StatKind::SecondOrder) {
      // Isserlis: E[Zij Zkl] - rho_ij rho_kl = rho_ik rho_jl + rho_il rho_jk.
      const double rij = g(a.i, a.j), rkl = g(b.i, b.j);
      return (g(a.i, b.i) * g(a.j, b.j) + g(a.i, b.j) * g(a.j, b.i)) /
             std::sqrt((1.0 + rij * rij) * (1.0 + rkl * rkl));
    }
    return rescale(kind, omega_empirical_gaussian(g, a, b), g(a.i, a.j), g(b.i, b.j));
  });
  return {std::move(values), kind, CovarianceSource::GaussianClosedForm};
}

namespace {

constexpr std::size_t binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

// Colex rank of a sorted quadruple a <= b <= c <= d.
std::size_t quad_rank(std::array<int, 4> q) {
  std::sort(q.begin(), q.end());
  return binom(static_cast<std::size_t>(q[0]), 1) + binom(static_cast<std::size_t>(q[1]) + 1, 2) +
         binom(static_cast<std::size_t>(q[2]) + 2, 3) + binom(static_cast<std::size_t>(q[3]) + 3, 4);
}

}  // namespace

FourthMoments::FourthMoments(CorrelationMatrix correlation)
    : correlation_(std::move(correlation)),
      values_(binom(static_cast<std::size_t>(correlation_.p()) + 3, 4)) {}

FourthMoments::FourthMoments(CorrelationMatrix correlation,
                             const std::function<double(int, int, int, int)>& moment)
    : FourthMoments(std::move(correlation)) {
  const int p = this->p();
  for (int d = 0; d < p; ++d)
    for (int c = 0; c <= d; ++c)
      for (int b = 0; b <= c; ++b)
        for (int a = 0; a <= b; ++a) values_[quad_rank({a, b, c, d})] = moment(a, b, c, d);
}

double FourthMoments::operator()(int i, int j, int k, int l) const {
  const int p = this->p();
  if (i < 0 || j < 0 || k < 0 || l < 0 || i >= p || j >= p || k >= p || l >= p)
    throw IndexError("fourth-moment index out of range");
  return values_[quad_rank({i, j, k, l})];
}

FourthMoments fourth_moments(const SampleMatrix& samples) {
  const SampleMatrix z = standardize(samples);
  FourthMoments out(empirical_correlation(samples));
  const int p = z.p();
  const auto n = static_cast<std::size_t>(z.n());
  const auto& k = kernels::active();
  const auto col = [&](int j) { return z.data().col(j).data(); };
  for (int d = 0; d < p; ++d)
    for (int c = 0; c <= d; ++c)
      for (int b = 0; b <= c; ++b)
        for (int a = 0; a <= b; ++a)
          out.values_[quad_rank({a, b, c, d})] =
              k.dot4(col(a), col(b), col(c), col(d), n) / static_cast<double>(n);
  return out;
}

PairCovariance omega_general(const FourthMoments& mu, StatKind kind, int threads) {
  const Matrix& g = mu.correlation().values();
  const int p = mu.p();
  std::vector<double> product_var;
  if (kind == StatKind::SecondOrder) {
    for (const PairIndex& a : enumerate_pairs(p)) {
      const double v = mu(a.i, a.j, a.i, a.j) - g(a.i, a.j) * g(a.i, a.j);
      if (!(v > 0.0)) {
        throw SingularityError("product variance of pair (" + std::to_string(a.i + 1) + ", " +
                               std::to_string(a.j + 1) + ") is not positive");
      }
      product_var.push_back(v);
    }
  } else if (kind != StatKind::Empirical) {
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j) one_minus_sq(g(i, j), kind);
  }
  Matrix values = fill_symmetric(p, threads, [&](PairIndex a, PairIndex b) {
    const int i = a.i, j = a.j, k = b.i, l = b.j;
    const double rij = g(i, j), rkl = g(k, l);
    if (kind == StatKind::SecondOrder) {
      return (mu(i, j, k, l) - rij * rkl) /
             std::sqrt(product_var[pair_to_flat(i, j, p)] * product_var[pair_to_flat(k, l, p)]);
    }
    const double omega =
        mu(i, j, k, l) +
        0.25 * rij * rkl * (mu(i, i, k, k) + mu(i, i, l, l) + mu(j, j, k, k) + mu(j, j, l, l)) -
        0.5 * rij * (mu(i, i, k, l) + mu(j, j, k, l)) - 0.5 * rkl * (mu(i, j, k, k) + mu(i, j, l, l));
    return rescale(kind, omega, rij, rkl);
  });
  return {std::move(values), kind, CovarianceSource::FourthMomentPlugin};
}

}  // namespace corrgraph
