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

#include "corrgraph/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "corrgraph/error.hpp"
#include "corrgraph/normal.hpp"

namespace corrgraph {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Bonferroni:
      return "bonferroni";
    case Method::Sidak:
      return "sidak";
    case Method::BootRW:
      return "bootrw";
    case Method::MaxT:
      return "maxt";
    case Method::OracleMaxT:
      return "oraclemaxt";
    case Method::BH:
      return "bh";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (to_string(m) == name) return m;
  return std::nullopt;
}

bool RejectionSet::contains(std::uint32_t h) const {
  return std::binary_search(rejected.begin(), rejected.end(), h);
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

// Applies `threshold(C)` and `reject(h, t)` to the surviving set until it
// stops shrinking (or once, for single-step).
RejectionSet iterate(std::size_t m, bool stepdown,
                     const std::function<double(const PairSubset&)>& threshold,
                     const std::function<bool(std::uint32_t, double)>& reject) {
  RejectionSet out;
  PairSubset alive = full_subset(m);
  while (!alive.empty()) {
    const double t = threshold(alive);
    out.thresholds.push_back(t);
    ++out.iterations;
    PairSubset keep;
    keep.reserve(alive.size());
    bool any = false;
    for (std::uint32_t h : alive) {
      if (reject(h, t)) {
        out.rejected.push_back(h);
        any = true;
      } else {
        keep.push_back(h);
      }
    }
    if (!stepdown || !any) break;
    alive = std::move(keep);
  }
  std::sort(out.rejected.begin(), out.rejected.end());
  return out;
}

RejectionSet run(Method method, bool stepdown, const StatVector& stats,
                 const ProcedureContext& context, double alpha) {
  check_alpha(alpha);
  const std::size_t m = stats.size();
  if (m == 0) throw ConfigError("no hypotheses to test");
  RejectionSet out;
  switch (method) {
    case Method::BH:
      if (stepdown) throw ConfigError("BH has no step-down variant");
      return bh_fdr(p_values(stats), alpha);
    case Method::Bonferroni:
      out = bonferroni(p_values(stats), alpha, stepdown);
      break;
    case Method::Sidak:
      out = iterate(
          m, stepdown, [&](const PairSubset& c) { return sidak_threshold(alpha, c.size()); },
          [&](std::uint32_t h, double t) { return std::fabs(stats.values[h]) > t; });
      break;
    case Method::BootRW:
    case Method::MaxT:
    case Method::OracleMaxT: {
      const DrawMatrix* draws = context.draws;
      if (draws == nullptr)
        throw ConfigError(std::string(to_string(method)) + " needs a draw matrix");
      if (draws->cols() != m) throw ConfigError("draw matrix width does not match the statistics");
      out = iterate(
          m, stepdown, [&](const PairSubset& c) { return max_quantile(*draws, alpha, c); },
          [&](std::uint32_t h, double t) { return std::fabs(stats.values[h]) > t; });
      break;
    }
  }
  out.procedure = {method, stepdown};
  out.alpha = alpha;
  return out;
}

}  // namespace

RejectionSet single_step(Method method, const StatVector& stats, const ProcedureContext& context,
                         double alpha) {
  return run(method, false, stats, context, alpha);
}

RejectionSet step_down(Method method, const StatVector& stats, const ProcedureContext& context,
                       double alpha) {
  return run(method, true, stats, context, alpha);
}

RejectionSet run_procedure(ProcedureKind kind, const StatVector& stats,
                           const ProcedureContext& context, double alpha) {
  return run(kind.method, kind.stepdown, stats, context, alpha);
}

RejectionSet bonferroni(const PValueVector& pvalues, double alpha, bool stepdown) {
  check_alpha(alpha);
  const std::size_t m = pvalues.size();
  if (m == 0) throw ConfigError("no hypotheses to test");
  RejectionSet out = iterate(
      m, stepdown, [&](const PairSubset& c) { return alpha / static_cast<double>(c.size()); },
      [&](std::uint32_t h, double t) { return pvalues.values[h] <= t; });
  out.pvalues = pvalues;
  out.procedure = {Method::Bonferroni, stepdown};
  out.alpha = alpha;
  return out;
}

RejectionSet bh_fdr(const PValueVector& pvalues, double alpha) {
  check_alpha(alpha);
  const std::size_t m = pvalues.size();
  std::vector<double> sorted = pvalues.values;
  std::sort(sorted.begin(), sorted.end());
  std::size_t k_hat = 0;
  for (std::size_t k = m; k >= 1; --k) {
    if (sorted[k - 1] <= alpha * static_cast<double>(k) / static_cast<double>(m)) {
      k_hat = k;
      break;
    }
  }
  RejectionSet out;
  const double cut = alpha * static_cast<double>(k_hat) / static_cast<double>(m);
  if (k_hat > 0)
    for (std::size_t h = 0; h < m; ++h)
      if (pvalues.values[h] <= cut) out.rejected.push_back(static_cast<std::uint32_t>(h));
  out.thresholds.push_back(cut);
  out.iterations = 1;
  out.pvalues = pvalues;
  out.procedure = {Method::BH, false};
  out.alpha = alpha;
  return out;
}

}  // namespace corrgraph
