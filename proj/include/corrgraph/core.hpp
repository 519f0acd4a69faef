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

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace corrgraph {

using Matrix = Eigen::MatrixXd;  // column-major

/// A tested pair of variables, zero-based with i < j.
struct PairIndex {
  int i = 0;
  int j = 1;

  friend bool operator==(const PairIndex&, const PairIndex&) = default;
};

/// Number of pairs m = p(p-1)/2.
constexpr std::size_t pair_count(int p) {
  return p < 2 ? 0 : static_cast<std::size_t>(p) * static_cast<std::size_t>(p - 1) / 2;
}

/// Position of (i, j) in the lexicographic enumeration of pairs i < j.
/// Zero-based variable indexes. Throws IndexError when out of range.
std::size_t pair_to_flat(int i, int j, int p);

/// Inverse of pair_to_flat. Throws IndexError when flat >= m.
PairIndex flat_to_pair(std::size_t flat, int p);

/// All pairs of p variables in flat order.
std::vector<PairIndex> enumerate_pairs(int p);

/// Sorted list of flat pair indexes.
using PairSubset = std::vector<std::uint32_t>;

/// {0, ..., m-1}
PairSubset full_subset(std::size_t m);

/// n observations of p variables. Entries are finite and p >= 2; columns may
/// still be constant, which operations needing a variance reject.
class SampleMatrix {
 public:
  explicit SampleMatrix(Matrix data);

  int n() const { return static_cast<int>(data_.rows()); }
  int p() const { return static_cast<int>(data_.cols()); }
  const Matrix& data() const { return data_; }

  std::span<const double> column(int j) const {
    return {data_.col(j).data(), static_cast<std::size_t>(data_.rows())};
  }

 private:
  Matrix data_;
};

/// Symmetric p x p matrix with unit diagonal and entries in [-1, 1].
class CorrelationMatrix {
 public:
  /// Validates symmetry, unit diagonal and range (tolerance 1e-12).
  explicit CorrelationMatrix(Matrix values);

  /// Same checks plus positive definiteness; for population models.
  static CorrelationMatrix model(Matrix values);

  static CorrelationMatrix identity(int p);

  int p() const { return static_cast<int>(values_.rows()); }
  double operator()(int i, int j) const { return values_(i, j); }
  const Matrix& values() const { return values_; }

  /// Off-diagonal entries in pair order.
  std::vector<double> pair_values() const;

 private:
  Matrix values_;
};

/// Pearson correlation with divisor n. Throws DegenerateInputError naming a
/// zero-variance column.
CorrelationMatrix empirical_correlation(const SampleMatrix& samples);

/// Columns centered and scaled to unit variance (divisor n).
SampleMatrix standardize(const SampleMatrix& samples);

/// Centered copy of the data and the centered sums of squares per column.
/// Throws DegenerateInputError when a column is numerically constant.
struct CenteredColumns {
  Matrix values;
  std::vector<double> sum_squares;
};
CenteredColumns center_columns(const Matrix& data);

}  // namespace corrgraph
