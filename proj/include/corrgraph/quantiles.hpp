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

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "corrgraph/core.hpp"
#include "corrgraph/statistics.hpp"

namespace corrgraph {

/// Phi^{-1}((1 - alpha)^{1/m} / 2 + 1/2), computed from the upper tail so it
/// stays accurate for large m.
double sidak_threshold(double alpha, std::size_t m);

/// Statistic-scale Bonferroni cut Phi^{-1}(1 - alpha / (2m)).
double bonferroni_threshold(double alpha, std::size_t m);

struct CholeskyFactor {
  Matrix lower;
  double jitter = 0.0;  // epsilon added to the diagonal
};

/// Cholesky factor of sigma + eps I, with eps the first of
/// {0, 1e-12, 1e-10, 1e-8} x max diagonal that works. Throws NotPsdError if
/// sigma is not symmetric or no jitter level succeeds.
CholeskyFactor cholesky_psd(const Matrix& sigma);

enum class DrawProvenance { ParametricGaussian, NonparametricBootstrap };

/// B x m simulated or resampled statistic vectors, row-major. Quantiles for
/// any pair subset are taken over the same stored rows.
class DrawMatrix {
 public:
  DrawMatrix(std::size_t rows, std::size_t cols, DrawProvenance provenance)
      : rows_(rows), cols_(cols), provenance_(provenance), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  DrawProvenance provenance() const { return provenance_; }

  std::span<double> row(std::size_t b) { return {data_.data() + b * cols_, cols_}; }
  std::span<const double> row(std::size_t b) const { return {data_.data() + b * cols_, cols_}; }

  /// Redrawn bootstrap resamples (degenerate columns); 0 for Gaussian draws.
  std::size_t redraws = 0;

 private:
  std::size_t rows_;
  std::size_t cols_;
  DrawProvenance provenance_;
  std::vector<double> data_;
};

struct QuantileEstimate {
  double value = 0.0;
  double alpha = 0.05;
  std::size_t draws = 0;
  PairSubset subset;
  std::uint64_t seed = 0;
  std::shared_ptr<const DrawMatrix> draw_matrix;
};

/// One-based order-statistic rank ceil((1 - alpha) B), clamped to [1, B].
std::size_t quantile_rank(double alpha, std::size_t draws);

/// (1 - alpha) quantile of max_{h in subset} |row_h| over the stored rows.
/// Exact and deterministic; C subset of C' gives a value no larger.
double max_quantile(const DrawMatrix& draws, double alpha, const PairSubset& subset);

/// B rows of L xi with xi standard normal and L L^T = sigma (+ jitter).
/// Row b uses RandomStream(seed, ParametricDraws, b).
DrawMatrix gaussian_draws(const Matrix& sigma, std::size_t draws, std::uint64_t seed,
                          int threads = 1);

/// Same with a precomputed factor.
DrawMatrix gaussian_draws(const CholeskyFactor& factor, std::size_t draws, std::uint64_t seed,
                          int threads = 1);

/// B bootstrap resamples of the rows, each turned into the centered
/// statistic vector:
///   Empirical        sqrt(n) (r* - r)
///   Student, Fisher  T(r*) - T(r)
///   SecondOrder      sqrt(n) (mean Z* - mean Z) / sqrt(var Z*)
/// A resample with a constant column is redrawn; more than B redraws in
/// total throws DegenerateInputError.
DrawMatrix bootstrap_draws(const SampleMatrix& samples, StatKind kind, std::size_t draws,
                           std::uint64_t seed, int threads = 1);

/// Parametric bootstrap quantile of ||N(0, sigma)|_subset||_inf. draws >= 100.
QuantileEstimate max_gauss_quantile(const PairCovariance& sigma, double alpha, std::size_t draws,
                                    const PairSubset& subset, std::uint64_t seed, int threads = 1);

/// Nonparametric bootstrap quantile of the centered max statistic. draws >= 50.
QuantileEstimate bootstrap_max_quantile(const SampleMatrix& samples, StatKind kind, double alpha,
                                        std::size_t draws, const PairSubset& subset,
                                        std::uint64_t seed, int threads = 1);

}  // namespace corrgraph
