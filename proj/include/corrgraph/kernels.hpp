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

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2+FMA version selected once at runtime. Results of the two
// versions agree to rounding (summation order differs); max-type reductions
// agree exactly.

#include <cstdint>
#include <span>
#include <string_view>

namespace corrgraph::kernels {

enum class Isa { Scalar, Avx2 };

/// Function table for one instruction set.
struct KernelTable {
  Isa isa;
  /// sum_k x[k]
  double (*sum)(const double* x, std::size_t n);
  /// sum_k x[k] * y[k]
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// sum_k (x[k] * y[k])^2
  double (*dot_sq)(const double* x, const double* y, std::size_t n);
  /// sum_k a[k] * b[k] * c[k] * d[k]
  double (*dot4)(const double* a, const double* b, const double* c,
                 const double* d, std::size_t n);
  /// y[k] = x[k] * scale - shift
  void (*affine)(const double* x, double shift, double scale, double* y,
                 std::size_t n);
  /// max_k |x[k]|, 0 for n == 0
  double (*max_abs)(const double* x, std::size_t n);
  /// max_k |x[idx[k]]|, 0 for n == 0
  double (*max_abs_indexed)(const double* x, const std::uint32_t* idx,
                            std::size_t n);
  /// y = L x for a row-major dense lower-triangular m x m matrix L.
  void (*lower_matvec)(const double* lower, const double* x, double* y,
                       std::size_t m);
};

const KernelTable& scalar_table();
/// nullptr when the library was built without AVX2 support.
const KernelTable* avx2_table();

/// True when the running CPU supports AVX2 and FMA and the library carries
/// the AVX2 kernels.
bool avx2_available();

/// Table in use. Chosen on first call: AVX2 when available, unless the
/// environment variable CORRGRAPH_ISA is set to "scalar".
const KernelTable& active();

/// Forces an instruction set. Throws ConfigError if it is unavailable.
/// Not thread safe with respect to concurrent kernel calls.
void set_active(Isa isa);

std::string_view isa_name(Isa isa);

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double dot_sq(std::span<const double> x, std::span<const double> y) {
  return active().dot_sq(x.data(), y.data(), x.size());
}
inline double max_abs(std::span<const double> x) {
  return active().max_abs(x.data(), x.size());
}
inline double max_abs_indexed(std::span<const double> x,
                              std::span<const std::uint32_t> idx) {
  return active().max_abs_indexed(x.data(), idx.data(), idx.size());
}

}  // namespace corrgraph::kernels
