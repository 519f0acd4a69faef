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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "corrgraph/kernels.hpp"
#include "corrgraph/rng.hpp"

using namespace corrgraph;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed, StreamPurpose::Generic);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

double rel_close(double a, double b, double scale) { return std::abs(a - b) <= 1e-13 * scale; }

}  // namespace

TEST_CASE("AVX2 kernels agree with the scalar reference", "[kernels]") {
  if (!kernels::avx2_available()) SKIP("AVX2 not available on this machine");
  const auto& s = kernels::scalar_table();
  const auto& v = *kernels::avx2_table();
  // Lengths straddle every remainder of the unrolled loops.
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 33u, 100u, 1001u}) {
    const auto a = random_vector(n, 10 + n);
    const auto b = random_vector(n, 20 + n);
    const auto c = random_vector(n, 30 + n);
    const auto d = random_vector(n, 40 + n);
    double scale = 1.0;
    for (std::size_t k = 0; k < n; ++k) scale += std::abs(a[k]) * (1 + std::abs(b[k]) * (1 + std::abs(c[k] * d[k])));

    CHECK(rel_close(s.sum(a.data(), n), v.sum(a.data(), n), scale));
    CHECK(rel_close(s.dot(a.data(), b.data(), n), v.dot(a.data(), b.data(), n), scale));
    CHECK(rel_close(s.dot_sq(a.data(), b.data(), n), v.dot_sq(a.data(), b.data(), n), scale * scale));
    CHECK(rel_close(s.dot4(a.data(), b.data(), c.data(), d.data(), n),
                    v.dot4(a.data(), b.data(), c.data(), d.data(), n), scale));
    CHECK(s.max_abs(a.data(), n) == v.max_abs(a.data(), n));

    std::vector<double> y1(n), y2(n);
    s.affine(a.data(), 0.3, -1.7, y1.data(), n);
    v.affine(a.data(), 0.3, -1.7, y2.data(), n);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(y1[k] - y2[k]) <= 1e-15 * (1 + std::abs(y1[k])));

    std::vector<std::uint32_t> idx;
    for (std::size_t k = 0; k < n; k += 3) idx.push_back(static_cast<std::uint32_t>(k));
    CHECK(s.max_abs_indexed(a.data(), idx.data(), idx.size()) ==
          v.max_abs_indexed(a.data(), idx.data(), idx.size()));
  }
}

TEST_CASE("AVX2 lower-triangular product agrees with the scalar reference", "[kernels]") {
  if (!kernels::avx2_available()) SKIP("AVX2 not available on this machine");
  for (std::size_t m : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 325u}) {
    auto lower = random_vector(m * m, 50 + m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = r + 1; c < m; ++c) lower[r * m + c] = 0.0;
    const auto x = random_vector(m, 60 + m);
    std::vector<double> y1(m), y2(m);
    kernels::scalar_table().lower_matvec(lower.data(), x.data(), y1.data(), m);
    kernels::avx2_table()->lower_matvec(lower.data(), x.data(), y2.data(), m);
    for (std::size_t r = 0; r < m; ++r) {
      double scale = 1.0;
      for (std::size_t c = 0; c <= r; ++c) scale += std::abs(lower[r * m + c] * x[c]);
      CHECK(std::abs(y1[r] - y2[r]) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("scalar kernels on small exact inputs", "[kernels]") {
  const auto& s = kernels::scalar_table();
  const double a[] = {1, -2, 3, -4, 5};
  const double b[] = {2, 2, 2, 2, 2};
  CHECK(s.sum(a, 5) == 3.0);
  CHECK(s.dot(a, b, 5) == 6.0);
  CHECK(s.dot_sq(a, b, 5) == 4.0 * 55.0);
  CHECK(s.dot4(a, b, b, a, 5) == 4.0 * 55.0);
  CHECK(s.max_abs(a, 5) == 5.0);
  CHECK(s.max_abs(a, 0) == 0.0);
  const std::uint32_t idx[] = {1, 3};
  CHECK(s.max_abs_indexed(a, idx, 2) == 4.0);
  const double lower[] = {1, 0, 0, 2, 3, 0, 4, 5, 6};
  const double x[] = {1, 1, 1};
  double y[3];
  s.lower_matvec(lower, x, y, 3);
  CHECK(y[0] == 1.0);
  CHECK(y[1] == 5.0);
  CHECK(y[2] == 15.0);
}

TEST_CASE("dispatch can be forced to scalar and back", "[kernels]") {
  const auto before = kernels::active().isa;
  kernels::set_active(kernels::Isa::Scalar);
  CHECK(kernels::active().isa == kernels::Isa::Scalar);
  CHECK(kernels::isa_name(kernels::Isa::Scalar) == "scalar");
  if (kernels::avx2_available()) {
    kernels::set_active(kernels::Isa::Avx2);
    CHECK(kernels::active().isa == kernels::Isa::Avx2);
  } else {
    CHECK_THROWS(kernels::set_active(kernels::Isa::Avx2));
  }
  kernels::set_active(before);
}
