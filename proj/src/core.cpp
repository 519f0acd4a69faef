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

#include "corrgraph/core.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "corrgraph/error.hpp"
#include "corrgraph/kernels.hpp"

namespace corrgraph {

std::size_t pair_to_flat(int i, int j, int p) {
  if (p < 2 || i < 0 || j >= p || i >= j) {
    throw IndexError("invalid pair (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") for p = " + std::to_string(p));
  }
  // Pairs starting before row i: sum_{a<i} (p - 1 - a).
  const auto ii = static_cast<std::size_t>(i);
  const auto pp = static_cast<std::size_t>(p);
  return ii * (2 * pp - ii - 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

PairIndex flat_to_pair(std::size_t flat, int p) {
  const std::size_t m = pair_count(p);
  if (flat >= m) {
    throw IndexError("flat pair index " + std::to_string(flat) + " out of range for p = " +
                     std::to_string(p));
  }
  int i = 0;
  std::size_t row_start = 0;
  std::size_t row_len = static_cast<std::size_t>(p - 1);
  while (flat >= row_start + row_len) {
    row_start += row_len;
    --row_len;
    ++i;
  }
  return {i, i + 1 + static_cast<int>(flat - row_start)};
}

std::vector<PairIndex> enumerate_pairs(int p) {
  std::vector<PairIndex> pairs;
  pairs.reserve(pair_count(p));
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) pairs.push_back({i, j});
  return pairs;
}

PairSubset full_subset(std::size_t m) {
  PairSubset s(m);
  for (std::size_t k = 0; k < m; ++k) s[k] = static_cast<std::uint32_t>(k);
  return s;
}

SampleMatrix::SampleMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.cols() < 2) throw ConfigError("sample matrix needs at least 2 variables");
  if (data_.rows() < 1) throw ConfigError("sample matrix has no observations");
  if (!data_.allFinite()) throw DegenerateInputError("sample matrix has non-finite entries");
}

namespace {

constexpr double kCorrTol = 1e-12;

void validate_correlation(const Matrix& v) {
  if (v.rows() != v.cols() || v.rows() < 1) throw ConfigError("correlation matrix must be square");
  if (!v.allFinite()) throw ConfigError("correlation matrix has non-finite entries");
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    if (std::abs(v(i, i) - 1.0) > kCorrTol) throw ConfigError("correlation matrix diagonal must be 1");
    for (Eigen::Index j = i + 1; j < v.cols(); ++j) {
      if (std::abs(v(i, j) - v(j, i)) > kCorrTol) throw ConfigError("correlation matrix is not symmetric");
      if (std::abs(v(i, j)) > 1.0 + kCorrTol) throw ConfigError("correlation entry outside [-1, 1]");
    }
  }
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(Matrix values) : values_(std::move(values)) {
  validate_correlation(values_);
}

CorrelationMatrix CorrelationMatrix::model(Matrix values) {
  CorrelationMatrix c(std::move(values));
  Eigen::LLT<Matrix> llt(c.values_);
  if (llt.info() != Eigen::Success) throw NotPsdError("correlation model is not positive definite");
  return c;
}

CorrelationMatrix CorrelationMatrix::identity(int p) {
  return CorrelationMatrix(Matrix::Identity(p, p));
}

std::vector<double> CorrelationMatrix::pair_values() const {
  std::vector<double> out;
  out.reserve(pair_count(p()));
  for (int i = 0; i < p(); ++i)
    for (int j = i + 1; j < p(); ++j) out.push_back(values_(i, j));
  return out;
}

CenteredColumns center_columns(const Matrix& data) {
  const auto n = static_cast<std::size_t>(data.rows());
  CenteredColumns out{Matrix(data.rows(), data.cols()), std::vector<double>(data.cols())};
  const auto& k = kernels::active();
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const double* col = data.col(j).data();
    const double mean = k.sum(col, n) / static_cast<double>(n);
    double* dst = out.values.col(j).data();
    k.affine(col, mean, 1.0, dst, n);
    const double ss = k.dot(dst, dst, n);
    // Rounding residue of a constant column is far below this floor.
    const double scale = data.col(j).cwiseAbs().maxCoeff();
    const double floor = static_cast<double>(n) *
                         std::pow(64.0 * std::numeric_limits<double>::epsilon() * scale, 2);
    if (!(ss > floor)) {
      throw DegenerateInputError("column " + std::to_string(j + 1) + " has zero variance",
                                 static_cast<std::ptrdiff_t>(j));
    }
    out.sum_squares[j] = ss;
  }
  return out;
}

CorrelationMatrix empirical_correlation(const SampleMatrix& samples) {
  const CenteredColumns c = center_columns(samples.data());
  const int p = samples.p();
  const auto n = static_cast<std::size_t>(samples.n());
  const auto& k = kernels::active();
  Matrix r = Matrix::Identity(p, p);
  for (int i = 0; i < p; ++i) {
    const double* ci = c.values.col(i).data();
    for (int j = i + 1; j < p; ++j) {
      const double g = k.dot(ci, c.values.col(j).data(), n);
      const double v = std::clamp(g / std::sqrt(c.sum_squares[i] * c.sum_squares[j]), -1.0, 1.0);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return CorrelationMatrix(std::move(r));
}

SampleMatrix standardize(const SampleMatrix& samples) {
  CenteredColumns c = center_columns(samples.data());
  const auto n = static_cast<std::size_t>(samples.n());
  const auto& k = kernels::active();
  for (int j = 0; j < samples.p(); ++j) {
    double* col = c.values.col(j).data();
    const double inv_sd = 1.0 / std::sqrt(c.sum_squares[j] / static_cast<double>(n));
    k.affine(col, 0.0, inv_sd, col, n);
  }
  return SampleMatrix(std::move(c.values));
}

}  // namespace corrgraph
