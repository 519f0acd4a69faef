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

#include "corrgraph/quantiles.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>

#include "corrgraph/error.hpp"
#include "corrgraph/kernels.hpp"
#include "corrgraph/normal.hpp"
#include "corrgraph/parallel.hpp"
#include "corrgraph/rng.hpp"

namespace corrgraph {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

}  // namespace

double sidak_threshold(double alpha, std::size_t m) {
  check_alpha(alpha);
  if (m == 0) throw ConfigError("Sidak threshold needs m >= 1");
  // Upper tail 1/2 (1 - (1 - alpha)^{1/m}).
  const double tail = -0.5 * std::expm1(std::log1p(-alpha) / static_cast<double>(m));
  return normal_upper_quantile(tail);
}

double bonferroni_threshold(double alpha, std::size_t m) {
  check_alpha(alpha);
  if (m == 0) throw ConfigError("Bonferroni threshold needs m >= 1");
  return normal_upper_quantile(alpha / (2.0 * static_cast<double>(m)));
}

CholeskyFactor cholesky_psd(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) throw NotPsdError("covariance must be square");
  if (!sigma.allFinite()) throw NotPsdError("covariance has non-finite entries");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < sigma.rows(); ++i)
    for (Eigen::Index j = i + 1; j < sigma.cols(); ++j)
      if (std::abs(sigma(i, j) - sigma(j, i)) > 1e-12 * scale)
        throw NotPsdError("covariance is not symmetric at (" + std::to_string(i + 1) + ", " +
                          std::to_string(j + 1) + ")");
  const double max_diag = sigma.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) throw NotPsdError("covariance has no positive diagonal entry");
  for (double level : {0.0, 1e-12, 1e-10, 1e-8}) {
    const double eps = level * max_diag;
    Matrix shifted = sigma;
    shifted.diagonal().array() += eps;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() == Eigen::Success) return {llt.matrixL(), eps};
  }
  throw NotPsdError("covariance is not positive semi-definite (Cholesky failed with jitter 1e-8)");
}

std::size_t quantile_rank(double alpha, std::size_t draws) {
  check_alpha(alpha);
  // The slack absorbs the representation error of (1 - alpha) B, e.g. 95.000000000000014.
  const double target = (1.0 - alpha) * static_cast<double>(draws);
  auto rank = static_cast<std::size_t>(std::ceil(target - 1e-9 * std::max(1.0, target)));
  return std::clamp<std::size_t>(rank, 1, draws);
}

double max_quantile(const DrawMatrix& draws, double alpha, const PairSubset& subset) {
  if (subset.empty()) throw ConfigError("quantile subset is empty");
  if (draws.rows() == 0) throw ConfigError("draw matrix is empty");
  for (std::uint32_t h : subset)
    if (h >= draws.cols()) throw IndexError("subset index " + std::to_string(h) + " out of range");
  const auto& k = kernels::active();
  const bool full = subset.size() == draws.cols();
  std::vector<double> maxima(draws.rows());
  for (std::size_t b = 0; b < draws.rows(); ++b) {
    const double* row = draws.row(b).data();
    maxima[b] = full ? k.max_abs(row, draws.cols()) : k.max_abs_indexed(row, subset.data(), subset.size());
  }
  const std::size_t rank = quantile_rank(alpha, draws.rows());
  std::nth_element(maxima.begin(), maxima.begin() + static_cast<std::ptrdiff_t>(rank - 1), maxima.end());
  return maxima[rank - 1];
}

DrawMatrix gaussian_draws(const Matrix& sigma, std::size_t draws, std::uint64_t seed, int threads) {
  return gaussian_draws(cholesky_psd(sigma), draws, seed, threads);
}

DrawMatrix gaussian_draws(const CholeskyFactor& factor, std::size_t draws, std::uint64_t seed,
                          int threads) {
  const auto m = static_cast<std::size_t>(factor.lower.rows());
  // Row-major copy for the matvec kernel.
  std::vector<double> lower(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) lower[i * m + j] = factor.lower(i, j);
  DrawMatrix out(draws, m, DrawProvenance::ParametricGaussian);
  const auto& k = kernels::active();
  parallel_for(draws, threads, [&](std::size_t b) {
    std::vector<double> xi(m);
    RandomStream rng(seed, StreamPurpose::ParametricDraws, static_cast<std::uint32_t>(b));
    rng.fill_normal(xi);
    k.lower_matvec(lower.data(), xi.data(), out.row(b).data(), m);
  });
  return out;
}

namespace {

void gather_rows(const Matrix& src, const std::vector<std::uint32_t>& rows, Matrix& dst) {
  for (Eigen::Index j = 0; j < src.cols(); ++j) {
    const double* s = src.col(j).data();
    double* d = dst.col(j).data();
    for (std::size_t r = 0; r < rows.size(); ++r) d[r] = s[rows[r]];
  }
}

}  // namespace

DrawMatrix bootstrap_draws(const SampleMatrix& samples, StatKind kind, std::size_t draws,
                           std::uint64_t seed, int threads) {
  const int n = samples.n();
  const int p = samples.p();
  const std::size_t m = pair_count(p);
  if (n < kMinObservations) throw DegenerateInputError("too few observations for the bootstrap");
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  // Full-sample reference values the resampled statistics are centered at.
  const bool second_order = kind == StatKind::SecondOrder;
  const SampleMatrix source = second_order ? standardize(samples) : samples;
  std::vector<double> reference;
  if (second_order) {
    reference = centered_product_moments(source.data()).mean;
  } else {
    reference = empirical_correlation(samples).pair_values();
    for (double& v : reference) v = transform_correlation(kind, v, n);
  }

  DrawMatrix out(draws, m, DrawProvenance::NonparametricBootstrap);
  std::vector<std::size_t> redraws(draws, 0);
  parallel_for(draws, threads, [&](std::size_t b) {
    std::vector<std::uint32_t> rows(static_cast<std::size_t>(n));
    Matrix resample(n, p);
    std::span<double> dst = out.row(b);
    // Attempts beyond `draws` cannot succeed overall, so stop there.
    for (std::size_t attempt = 0; attempt <= draws; ++attempt) {
      const std::uint64_t stream =
          static_cast<std::uint64_t>(StreamPurpose::BootstrapResample) | (attempt << 32);
      RandomStream rng(seed, stream, static_cast<std::uint32_t>(b));
      for (auto& r : rows) r = static_cast<std::uint32_t>(rng.uniform_below(static_cast<std::uint64_t>(n)));
      gather_rows(source.data(), rows, resample);
      try {
        if (second_order) {
          const ProductMoments pm = centered_product_moments(resample);
          for (std::size_t h = 0; h < m; ++h)
            dst[h] = sqrt_n * (pm.mean[h] - reference[h]) / std::sqrt(pm.variance[h]);
        } else {
          const std::vector<double> r = empirical_correlation(SampleMatrix(resample)).pair_values();
          for (std::size_t h = 0; h < m; ++h) {
            dst[h] = transform_correlation(kind, r[h], n) - reference[h];
          }
        }
        return;
      } catch (const DegenerateInputError&) {
        ++redraws[b];
      }
    }
  });
  for (std::size_t r : redraws) out.redraws += r;
  if (out.redraws > draws) {
    throw DegenerateInputError("bootstrap needed " + std::to_string(out.redraws) +
                               " redraws for " + std::to_string(draws) + " resamples");
  }
  return out;
}

QuantileEstimate max_gauss_quantile(const PairCovariance& sigma, double alpha, std::size_t draws,
                                    const PairSubset& subset, std::uint64_t seed, int threads) {
  check_alpha(alpha);
  if (draws < 100) throw ConfigError("parametric quantile needs at least 100 draws");
  if (subset.empty()) throw ConfigError("quantile subset is empty");
  auto matrix = std::make_shared<const DrawMatrix>(gaussian_draws(sigma.values, draws, seed, threads));
  const double value = max_quantile(*matrix, alpha, subset);
  return {value, alpha, draws, subset, seed, std::move(matrix)};
}

QuantileEstimate bootstrap_max_quantile(const SampleMatrix& samples, StatKind kind, double alpha,
                                        std::size_t draws, const PairSubset& subset,
                                        std::uint64_t seed, int threads) {
  check_alpha(alpha);
  if (draws < 50) throw ConfigError("bootstrap quantile needs at least 50 draws");
  if (subset.empty()) throw ConfigError("quantile subset is empty");
  auto matrix =
      std::make_shared<const DrawMatrix>(bootstrap_draws(samples, kind, draws, seed, threads));
  const double value = max_quantile(*matrix, alpha, subset);
  return {value, alpha, draws, subset, seed, std::move(matrix)};
}

}  // namespace corrgraph
