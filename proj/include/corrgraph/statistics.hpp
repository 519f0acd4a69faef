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

#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "corrgraph/core.hpp"

namespace corrgraph {

/// The four pairwise test statistics.
///   Empirical    sqrt(n) r
///   Student      sqrt(n-2) r / sqrt(1 - r^2)
///   Fisher       sqrt(n-3)/2 log((1 + r) / (1 - r))
///   SecondOrder  sqrt(n) mean(Z) / sqrt(var(Z)), Z the centered products
enum class StatKind { Empirical, Student, Fisher, SecondOrder };

inline constexpr StatKind kAllStatKinds[] = {StatKind::Empirical, StatKind::Student,
                                             StatKind::Fisher, StatKind::SecondOrder};

std::string_view to_string(StatKind kind);
std::optional<StatKind> parse_stat_kind(std::string_view name);

/// Statistics in pair order.
struct StatVector {
  StatKind kind = StatKind::Empirical;
  std::vector<double> values;
  int n = 0;

  std::size_t size() const { return values.size(); }
};

struct PValueVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

enum class CovarianceSource { GaussianClosedForm, FourthMomentPlugin, Oracle };

/// Asymptotic covariance of a statistic vector, m x m in pair order.
struct PairCovariance {
  Matrix values;
  StatKind kind = StatKind::Empirical;
  CovarianceSource source = CovarianceSource::GaussianClosedForm;

  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
};

/// |r| is clamped here before the Student and Fisher transforms so that
/// perfectly correlated columns give a large finite statistic.
inline constexpr double kSaturation = 1.0 - 1e-12;

/// Minimum sample size for any statistic (Fisher uses n - 3).
inline constexpr int kMinObservations = 4;

/// T(r) for the correlation-based kinds (not SecondOrder).
double transform_correlation(StatKind kind, double r, int n);

/// Correlation-based statistic vector from a correlation matrix.
StatVector statistic_from_correlation(const CorrelationMatrix& r, StatKind kind, int n);

/// Mean and variance (divisor n) of the centered products Z^(ij), per pair.
struct ProductMoments {
  std::vector<double> mean;
  std::vector<double> variance;
};
ProductMoments product_moments(const SampleMatrix& samples);

/// Same, on the data as given: columns are centered but not rescaled.
ProductMoments centered_product_moments(const Matrix& data);

/// Test statistics of the given kind. Throws DegenerateInputError for
/// constant columns, n < 4, or a vanishing product variance.
StatVector statistic(const SampleMatrix& samples, StatKind kind);

PValueVector p_values(const StatVector& stats);

/// Off-diagonal entries clamped to [-kSaturation, kSaturation]. Plug-in
/// covariances go through this so perfectly correlated columns stay finite.
CorrelationMatrix saturated(const CorrelationMatrix& r);

/// Closed-form asymptotic covariance for Gaussian data. Throws
/// SingularityError when a Student or Fisher entry needs |rho| = 1.
PairCovariance omega_gaussian(const CorrelationMatrix& gamma, StatKind kind, int threads = 1);

/// Standardized fourth cross-moments E[Zi Zj Zk Zl] of the standardized
/// variables, stored once per sorted index quadruple.
class FourthMoments {
 public:
  /// Fills every moment from `moment`, which must be symmetric in its
  /// arguments; only sorted quadruples are queried.
  FourthMoments(CorrelationMatrix correlation,
                const std::function<double(int, int, int, int)>& moment);

  int p() const { return correlation_.p(); }
  const CorrelationMatrix& correlation() const { return correlation_; }

  /// rho_{ijkl}, any argument order.
  double operator()(int i, int j, int k, int l) const;

  /// Number of stored quadruples, C(p + 3, 4).
  std::size_t stored() const { return values_.size(); }

 private:
  friend FourthMoments fourth_moments(const SampleMatrix& samples);
  explicit FourthMoments(CorrelationMatrix correlation);

  CorrelationMatrix correlation_;
  std::vector<double> values_;
};

/// Plug-in fourth moments: center, scale by the divisor-n standard
/// deviation, average products of four columns.
FourthMoments fourth_moments(const SampleMatrix& samples);

/// Asymptotic covariance from fourth moments; valid for non-Gaussian data.
PairCovariance omega_general(const FourthMoments& moments, StatKind kind, int threads = 1);

}  // namespace corrgraph
