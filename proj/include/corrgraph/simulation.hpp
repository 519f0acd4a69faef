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
#include <span>
#include <vector>

#include "corrgraph/core.hpp"
#include "corrgraph/procedures.hpp"
#include "corrgraph/statistics.hpp"

namespace corrgraph {

/// Symmetric 0/1 matrix with zero diagonal.
class AdjacencyMatrix {
 public:
  explicit AdjacencyMatrix(int p) : p_(p), cells_(static_cast<std::size_t>(p) * p, 0) {}

  int p() const { return p_; }
  bool operator()(int i, int j) const { return cells_[index(i, j)] != 0; }
  void set_edge(int i, int j, bool present);

  std::size_t edge_count() const;
  /// Edges over the p(p-1)/2 possible ones.
  double density() const;
  Matrix to_matrix() const;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * p_ + j; }

  int p_;
  std::vector<std::uint8_t> cells_;
};

/// Two communities of p/2 nodes; each unordered pair is an edge with
/// probability p_intra inside a community and p_inter across. p must be
/// even (ConfigError otherwise).
AdjacencyMatrix sbm_adjacency(int p, double p_intra, double p_inter, std::uint64_t seed);

/// Gamma = I + rho A with its true edge set.
struct CorrelationModel {
  CorrelationMatrix gamma;
  double rho = 0.0;
  AdjacencyMatrix adjacency;
  double min_eigenvalue = 0.0;
  /// 1 / |lambda_min|; infinite for the empty graph.
  double rho_bound = 0.0;
  /// 1 for pairs with a nonzero true correlation, in pair order.
  std::vector<std::uint8_t> alternative;

  std::size_t alternative_count() const;
};

/// Builds I + rho A after checking |rho| < 1 / |lambda_min(A)|; the
/// factorization is verified as well. Throws ModelError otherwise.
CorrelationModel correlation_model(const AdjacencyMatrix& adjacency, double rho);

/// n i.i.d. N(0, Gamma) rows; row l comes from RandomStream(seed,
/// GaussianSample, l), so the matrix does not depend on `threads`.
SampleMatrix sample_gaussian(const CorrelationModel& model, int n, std::uint64_t seed,
                             int threads = 1);

/// Same for an arbitrary correlation model matrix.
SampleMatrix sample_gaussian(const CorrelationMatrix& gamma, int n, std::uint64_t seed,
                             int threads = 1);

struct ReplicateMetrics {
  bool false_rejection = false;  // at least one true null rejected
  std::optional<double> tdp;     // |R cap H1| / |H1|; empty when H1 is empty
  double fdp = 0.0;              // |R cap H0| / max(|R|, 1)
};

ReplicateMetrics metrics(const RejectionSet& rejection, std::span<const std::uint8_t> alternative);

struct ExperimentConfig {
  int p = 26;
  double p_intra = 0.6;
  std::vector<double> p_inter = {0.01, 0.05, 0.15, 0.4};
  std::vector<double> rho = {0.2};
  std::vector<int> n = {100, 300, 500};
  std::vector<StatKind> stats = {StatKind::Empirical};
  std::vector<ProcedureKind> procedures = {{Method::Bonferroni, false}};
  double alpha = 0.05;
  int replicates = 1000;
  std::size_t bootrw_draws = 100;
  std::size_t maxt_draws = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Draw a fresh adjacency for every replicate instead of one per p_inter.
  bool redraw_adjacency = false;
  /// MaxT covariance from fourth moments instead of the Gaussian form.
  bool fourth_moment_plugin = false;
  /// Adjacency draws tried until I + rho A is positive definite.
  int adjacency_attempts = 1000;
  /// Bins of the exported correlation histograms; 0 disables them.
  int histogram_bins = 0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct MetricsRow {
  StatKind stat = StatKind::Empirical;
  ProcedureKind procedure;
  int n = 0;
  double p_inter = 0.0;
  double rho = 0.0;
  int replicates = 0;  // successful replicates
  double fwer = 0.0;
  double fwer_se = 0.0;
  std::optional<double> power;
  std::optional<double> power_se;
  double fdp = 0.0;
  double fdp_se = 0.0;
  /// More than the retry bound of degenerate samples in some replicate.
  bool failed = false;
};

/// Counts of empirical correlations over [-1, 1], split by true H0 / H1.
struct CorrelationHistogram {
  int n = 0;
  double p_inter = 0.0;
  double rho = 0.0;
  std::vector<std::uint64_t> null_counts;
  std::vector<std::uint64_t> alternative_counts;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  std::vector<CorrelationHistogram> histograms;
};

/// Degenerate samples are redrawn up to this many times per replicate.
inline constexpr int kReplicateRetries = 10;

/// Monte Carlo study over every (p_inter, rho, n) cell, statistic and
/// procedure. Rows are ordered by p_inter, rho, n, then statistic, then
/// procedure as listed in the config. Identical output for any thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Adjacency for one p_inter cell: the first positive definite draw of
/// sbm_adjacency under seeds derived from (seed, cell, attempt).
CorrelationModel draw_model(const ExperimentConfig& config, std::size_t p_inter_index,
                            double rho, std::uint64_t seed);

}  // namespace corrgraph
