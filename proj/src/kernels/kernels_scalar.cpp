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

#include <cmath>
#include <cstdint>

#include "corrgraph/kernels.hpp"

namespace corrgraph::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += x[k];
  return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += x[k] * y[k];
  return s;
}

double dot_sq_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double z = x[k] * y[k];
    s += z * z;
  }
  return s;
}

double dot4_scalar(const double* a, const double* b, const double* c,
                   const double* d, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k] * c[k] * d[k];
  return s;
}

void affine_scalar(const double* x, double shift, double scale, double* y,
                   std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] = x[k] * scale - shift;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::fmax(m, std::fabs(x[k]));
  return m;
}

double max_abs_indexed_scalar(const double* x, const std::uint32_t* idx,
                              std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::fmax(m, std::fabs(x[idx[k]]));
  return m;
}

void lower_matvec_scalar(const double* lower, const double* x, double* y,
                         std::size_t m) {
  for (std::size_t i = 0; i < m; ++i) y[i] = dot_scalar(lower + i * m, x, i + 1);
}

constexpr KernelTable kScalar{
    Isa::Scalar,   sum_scalar,     dot_scalar,
    dot_sq_scalar, dot4_scalar,    affine_scalar,
    max_abs_scalar, max_abs_indexed_scalar, lower_matvec_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace corrgraph::kernels
