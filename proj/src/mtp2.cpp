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

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdint>

#include "corrgraph/error.hpp"
#include "corrgraph/procedures.hpp"

namespace corrgraph {

Mtp2Result is_mtp2_gaussian_abs(const Matrix& sigma) {
  const auto d = static_cast<int>(sigma.rows());
  if (d < 1 || sigma.cols() != d) throw ConfigError("MTP2 check needs a square matrix");
  if (d > 20) throw ConfigError("MTP2 check is exhaustive and limited to d <= 20");
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw NotPsdError("MTP2 check needs a positive definite matrix");
  const Matrix precision = llt.solve(Matrix::Identity(d, d));

  constexpr double kTol = 1e-10;
  std::vector<int> signs(static_cast<std::size_t>(d), 1);
  // D_0 = +1 without loss of generality: D and -D give the same product.
  const std::uint32_t patterns = 1u << (d - 1);
  for (std::uint32_t mask = 0; mask < patterns; ++mask) {
    for (int i = 1; i < d; ++i) signs[static_cast<std::size_t>(i)] = (mask >> (i - 1)) & 1u ? -1 : 1;
    bool ok = true;
    for (int i = 0; i < d && ok; ++i)
      for (int j = i + 1; j < d; ++j)
        if (-signs[i] * signs[j] * precision(i, j) < -kTol) {
          ok = false;
          break;
        }
    if (ok) return {true, signs};
  }
  return {false, {}};
}

Matrix random_wishart_correlation(int d, RandomStream& rng) {
  Matrix g(d + 2, d);
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = rng.normal();
  const Matrix w = g.transpose() * g;
  const Eigen::VectorXd inv_sd = w.diagonal().cwiseSqrt().cwiseInverse();
  Matrix c = inv_sd.asDiagonal() * w * inv_sd.asDiagonal();
  c.diagonal().setOnes();
  return 0.5 * (c + c.transpose());
}

}  // namespace corrgraph
