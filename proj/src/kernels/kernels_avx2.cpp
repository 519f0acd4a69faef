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

// Built with -mavx2 -mfma. Nothing here may be called unless
// avx2_available() returned true.

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "corrgraph/kernels.hpp"

namespace corrgraph::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 16 <= n; k += 16) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + k));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + k + 4));
    a2 = _mm256_add_pd(a2, _mm256_loadu_pd(x + k + 8));
    a3 = _mm256_add_pd(a3, _mm256_loadu_pd(x + k + 12));
  }
  for (; k + 4 <= n; k += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + k));
  double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
  for (; k < n; ++k) s += x[k];
  return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 16 <= n; k += 16) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4), a1);
    a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k + 8), _mm256_loadu_pd(y + k + 8), a2);
    a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k + 12), _mm256_loadu_pd(y + k + 12), a3);
  }
  for (; k + 4 <= n; k += 4)
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), a0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
  for (; k < n; ++k) s += x[k] * y[k];
  return s;
}

double dot_sq_avx2(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256d z0 = _mm256_mul_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
    const __m256d z1 = _mm256_mul_pd(_mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4));
    a0 = _mm256_fmadd_pd(z0, z0, a0);
    a1 = _mm256_fmadd_pd(z1, z1, a1);
  }
  for (; k + 4 <= n; k += 4) {
    const __m256d z = _mm256_mul_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
    a0 = _mm256_fmadd_pd(z, z, a0);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; k < n; ++k) {
    const double z = x[k] * y[k];
    s += z * z;
  }
  return s;
}

double dot4_avx2(const double* a, const double* b, const double* c,
                 const double* d, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256d ab0 = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    const __m256d cd0 = _mm256_mul_pd(_mm256_loadu_pd(c + k), _mm256_loadu_pd(d + k));
    const __m256d ab1 = _mm256_mul_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4));
    const __m256d cd1 = _mm256_mul_pd(_mm256_loadu_pd(c + k + 4), _mm256_loadu_pd(d + k + 4));
    a0 = _mm256_fmadd_pd(ab0, cd0, a0);
    a1 = _mm256_fmadd_pd(ab1, cd1, a1);
  }
  for (; k + 4 <= n; k += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k));
    const __m256d cd = _mm256_mul_pd(_mm256_loadu_pd(c + k), _mm256_loadu_pd(d + k));
    a0 = _mm256_fmadd_pd(ab, cd, a0);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; k < n; ++k) s += a[k] * b[k] * c[k] * d[k];
  return s;
}

void affine_avx2(const double* x, double shift, double scale, double* y,
                 std::size_t n) {
  const __m256d vs = _mm256_set1_pd(scale);
  const __m256d vt = _mm256_set1_pd(shift);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(y + k, _mm256_fmsub_pd(_mm256_loadu_pd(x + k), vs, vt));
  // Keep the tail fused too so every element rounds the same way.
  for (; k < n; ++k) y[k] = std::fma(x[k], scale, -shift);
}

double max_abs_avx2(const double* x, std::size_t n) {
  __m256d m0 = _mm256_setzero_pd(), m1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    m0 = _mm256_max_pd(m0, abs_pd(_mm256_loadu_pd(x + k)));
    m1 = _mm256_max_pd(m1, abs_pd(_mm256_loadu_pd(x + k + 4)));
  }
  for (; k + 4 <= n; k += 4) m0 = _mm256_max_pd(m0, abs_pd(_mm256_loadu_pd(x + k)));
  double m = hmax(_mm256_max_pd(m0, m1));
  for (; k < n; ++k) m = std::fmax(m, std::fabs(x[k]));
  return m;
}

double max_abs_indexed_avx2(const double* x, const std::uint32_t* idx,
                            std::size_t n) {
  __m256d m0 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + k));
    m0 = _mm256_max_pd(m0, abs_pd(_mm256_i32gather_pd(x, vi, 8)));
  }
  double m = hmax(m0);
  for (; k < n; ++k) m = std::fmax(m, std::fabs(x[idx[k]]));
  return m;
}

// Four rows per pass so each load of x feeds four FMAs.
void lower_matvec_avx2(const double* lower, const double* x, double* y,
                       std::size_t m) {
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const double* r0 = lower + i * m;
    const double* r1 = r0 + m;
    const double* r2 = r1 + m;
    const double* r3 = r2 + m;
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
    const std::size_t len = i + 1;  // shortest of the four rows
    std::size_t k = 0;
    for (; k + 4 <= len; k += 4) {
      const __m256d xv = _mm256_loadu_pd(x + k);
      a0 = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + k), xv, a0);
      a1 = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + k), xv, a1);
      a2 = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + k), xv, a2);
      a3 = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + k), xv, a3);
    }
    double s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
    for (std::size_t t = k; t <= i; ++t) s0 += r0[t] * x[t];
    for (std::size_t t = k; t <= i + 1; ++t) s1 += r1[t] * x[t];
    for (std::size_t t = k; t <= i + 2; ++t) s2 += r2[t] * x[t];
    for (std::size_t t = k; t <= i + 3; ++t) s3 += r3[t] * x[t];
    y[i] = s0;
    y[i + 1] = s1;
    y[i + 2] = s2;
    y[i + 3] = s3;
  }
  for (; i < m; ++i) y[i] = dot_avx2(lower + i * m, x, i + 1);
}

constexpr KernelTable kAvx2{
    Isa::Avx2,   sum_avx2,     dot_avx2,
    dot_sq_avx2, dot4_avx2,    affine_avx2,
    max_abs_avx2, max_abs_indexed_avx2, lower_matvec_avx2,
};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace corrgraph::kernels
