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
#include <optional>
#include <string_view>
#include <vector>

#include "corrgraph/core.hpp"
#include "corrgraph/quantiles.hpp"
#include "corrgraph/rng.hpp"
#include "corrgraph/statistics.hpp"

namespace corrgraph {

/// Multiple testing corrections controlling the FWER.
///   Bonferroni  reject p <= alpha / |C|
///   Sidak       reject |T| > Phi^{-1}((1 - alpha)^{1/|C|} / 2 + 1/2)
///   BootRW      reject |T| > bootstrap quantile of the centered max statistic
///   MaxT        reject |T| > quantile of ||N(0, Omega(Gamma_hat))||_inf
///   OracleMaxT  as MaxT with the true Gamma (simulations only)
///   BH          Benjamini-Hochberg; controls the FDR, single-step only
/// C is the set of hypotheses still in play: everything for a single-step
/// run, the survivors of earlier rounds for a step-down run.
enum class Method { Bonferroni, Sidak, BootRW, MaxT, OracleMaxT, BH };

inline constexpr Method kAllMethods[] = {Method::Bonferroni, Method::Sidak, Method::BootRW,
                                         Method::MaxT, Method::OracleMaxT, Method::BH};

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

/// True for the methods that take their threshold from a DrawMatrix.
constexpr bool uses_draws(Method m) {
  return m == Method::BootRW || m == Method::MaxT || m == Method::OracleMaxT;
}

struct ProcedureKind {
  Method method = Method::Bonferroni;
  bool stepdown = false;

  friend bool operator==(const ProcedureKind&, const ProcedureKind&) = default;
};

struct RejectionSet {
  std::vector<std::uint32_t> rejected;  // sorted flat pair indexes
  std::vector<double> thresholds;       // one per round, on the rule's scale
  std::optional<PValueVector> pvalues;  // Bonferroni and BH only
  ProcedureKind procedure;
  double alpha = 0.05;
  int iterations = 0;

  bool contains(std::uint32_t h) const;
  std::size_t size() const { return rejected.size(); }
};

/// Inputs beyond the statistics. Methods with a quantile threshold need the
/// shared draw matrix; step-down rounds reuse it.
struct ProcedureContext {
  const DrawMatrix* draws = nullptr;
};

RejectionSet single_step(Method method, const StatVector& stats, const ProcedureContext& context,
                         double alpha);

/// Repeats the method on the non-rejected hypotheses until nothing new is
/// rejected. Per-round thresholds use |C_j| in place of m (Bonferroni,
/// Sidak) or the quantile over C_j from the shared draws.
RejectionSet step_down(Method method, const StatVector& stats, const ProcedureContext& context,
                       double alpha);

RejectionSet run_procedure(ProcedureKind kind, const StatVector& stats,
                           const ProcedureContext& context, double alpha);

/// Bonferroni on p-values directly.
RejectionSet bonferroni(const PValueVector& pvalues, double alpha, bool stepdown);

/// Benjamini-Hochberg: k = max{k : p_(k) <= alpha k / m}, reject p <= alpha k / m.
RejectionSet bh_fdr(const PValueVector& pvalues, double alpha);

struct Mtp2Result {
  bool mtp2 = false;
  std::vector<int> signs;  // diagonal of D when mtp2, else empty
};

/// Whether |X| is MTP2 for X ~ N(0, sigma): some D = diag(+-1) makes every
/// off-diagonal entry of -D sigma^{-1} D at least -1e-10. Exhaustive over
/// 2^{d-1} sign patterns, d <= 20. Throws NotPsdError for singular sigma.
Mtp2Result is_mtp2_gaussian_abs(const Matrix& sigma);

/// Correlation matrix of G^T G for a (d + 2) x d standard Gaussian G.
Matrix random_wishart_correlation(int d, RandomStream& rng);

}  // namespace corrgraph
