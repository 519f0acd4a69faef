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
#include <numeric>

#include "corrgraph/error.hpp"
#include "corrgraph/procedures.hpp"
#include "corrgraph/rng.hpp"
#include "corrgraph/simulation.hpp"
#include "corrgraph/statistics.hpp"

using namespace corrgraph;
using Catch::Approx;

namespace {

AdjacencyMatrix path(int p) {
  AdjacencyMatrix a(p);
  for (int i = 0; i + 1 < p; ++i) a.set_edge(i, i + 1, true);
  return a;
}

RejectionSet rejecting(std::vector<std::uint32_t> idx) {
  RejectionSet r;
  r.rejected = std::move(idx);
  return r;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.p = 8;
  c.p_intra = 0.6;
  c.p_inter = {0.1};
  c.rho = {0.2};
  c.n = {60};
  c.stats = {StatKind::Empirical, StatKind::Fisher};
  c.procedures = {{Method::Bonferroni, false}, {Method::Sidak, true}, {Method::MaxT, false},
                  {Method::BootRW, true},      {Method::OracleMaxT, false}, {Method::BH, false}};
  c.replicates = 12;
  c.bootrw_draws = 60;
  c.maxt_draws = 200;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("block model edge cases", "[simulation]") {
  CHECK_THROWS_AS(sbm_adjacency(5, 0.5, 0.5, 1), ConfigError);
  CHECK_THROWS_AS(sbm_adjacency(6, 1.5, 0.5, 1), ConfigError);
  const AdjacencyMatrix none = sbm_adjacency(10, 0.0, 0.0, 1);
  CHECK(none.edge_count() == 0);
  const AdjacencyMatrix all = sbm_adjacency(10, 1.0, 1.0, 1);
  CHECK(all.edge_count() == 45);
  const AdjacencyMatrix blocks = sbm_adjacency(10, 1.0, 0.0, 1);
  for (int i = 0; i < 10; ++i) {
    CHECK_FALSE(blocks(i, i));
    for (int j = 0; j < 10; ++j)
      if (i != j) CHECK(blocks(i, j) == ((i < 5) == (j < 5)));
  }
}

TEST_CASE("block model edge fraction", "[simulation][mc]") {
  // Expected (2 C(13,2) 0.6 + 169 0.01) / C(26,2).
  const double expected = (2 * 78 * 0.6 + 169 * 0.01) / 325.0;
  double total = 0;
  const int seeds = 400;
  for (int s = 0; s < seeds; ++s) {
    const AdjacencyMatrix a = sbm_adjacency(26, 0.6, 0.01, 1000 + s);
    total += a.density();
    for (int i = 0; i < 26; ++i)
      for (int j = 0; j < 26; ++j) REQUIRE(a(i, j) == a(j, i));
  }
  CHECK(std::abs(total / seeds - expected) < 0.01);
  CHECK(sbm_adjacency(26, 0.6, 0.01, 3).to_matrix() == sbm_adjacency(26, 0.6, 0.01, 3).to_matrix());
}

TEST_CASE("positive definiteness bound on the 3-path", "[simulation]") {
  const CorrelationModel ok = correlation_model(path(3), 0.70);
  CHECK(ok.min_eigenvalue == Approx(-std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ok.rho_bound == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ok.alternative == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(ok.alternative_count() == 2);
  try {
    correlation_model(path(3), 0.71);
    FAIL("expected ModelError");
  } catch (const ModelError& e) {
    CHECK(e.rho_bound() == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("empty graph gives the identity", "[simulation]") {
  const CorrelationModel m = correlation_model(AdjacencyMatrix(6), 0.95);
  CHECK(m.gamma.values() == Matrix::Identity(6, 6));
  CHECK(m.alternative_count() == 0);
  CHECK(std::isinf(m.rho_bound));
}

TEST_CASE("26-variable block models admit rho = 0.2 when sparse", "[simulation]") {
  int definite = 0;
  for (int s = 0; s < 50; ++s) {
    try {
      const CorrelationModel m = correlation_model(sbm_adjacency(26, 0.6, 0.05, s), 0.2);
      CHECK(m.rho_bound > 0.2);
      ++definite;
    } catch (const ModelError&) {
    }
  }
  CHECK(definite >= 45);
}

TEST_CASE("Gaussian samples", "[simulation][mc]") {
  const CorrelationModel null = correlation_model(AdjacencyMatrix(4), 0.0);
  const CorrelationMatrix r = empirical_correlation(sample_gaussian(null, 100000, 1));
  for (double v : r.pair_values()) CHECK(std::abs(v) < 0.02);

  const CorrelationModel chain = correlation_model(path(3), 0.2);
  const CorrelationMatrix big = empirical_correlation(sample_gaussian(chain, 1000000, 2));
  CHECK(std::abs(big(0, 1) - 0.2) < 0.01);
  CHECK(std::abs(big(0, 2)) < 0.01);

  const SampleMatrix a = sample_gaussian(chain, 500, 3, 1);
  const SampleMatrix b = sample_gaussian(chain, 500, 3, 4);
  CHECK(a.data() == b.data());
}

TEST_CASE("per-replicate metrics", "[simulation]") {
  const std::vector<std::uint8_t> truth = {1, 0, 1, 0};
  const ReplicateMetrics none = metrics(rejecting({}), truth);
  CHECK_FALSE(none.false_rejection);
  CHECK(none.tdp == 0.0);
  CHECK(none.fdp == 0.0);
  const ReplicateMetrics exact = metrics(rejecting({0, 2}), truth);
  CHECK_FALSE(exact.false_rejection);
  CHECK(exact.tdp == 1.0);
  CHECK(exact.fdp == 0.0);
  const ReplicateMetrics wrong = metrics(rejecting({1}), truth);
  CHECK(wrong.false_rejection);
  CHECK(wrong.tdp == 0.0);
  CHECK(wrong.fdp == 1.0);
  const ReplicateMetrics mixed = metrics(rejecting({0, 1, 3}), truth);
  CHECK(mixed.tdp == 0.5);
  CHECK(mixed.fdp == Approx(2.0 / 3.0));
  CHECK_FALSE(metrics(rejecting({0}), std::vector<std::uint8_t>{0, 0}).tdp.has_value());
}

TEST_CASE("config validation", "[simulation]") {
  ExperimentConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.p = 7;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.replicates = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.p_inter = {1.2};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.procedures = {{Method::BH, true}};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.n = {3};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("experiment rows and reproducibility", "[simulation]") {
  const ExperimentConfig c = small_config();
  const ExperimentResult one = run_experiment(c);
  REQUIRE(one.rows.size() == c.stats.size() * c.procedures.size());
  for (const auto& row : one.rows) {
    CHECK(row.replicates == 12);
    CHECK_FALSE(row.failed);
    CHECK(row.fwer >= 0.0);
    CHECK(row.fwer <= 1.0);
    REQUIRE(row.power.has_value());
    CHECK(*row.power >= 0.0);
    CHECK(*row.power <= 1.0);
    CHECK(row.fdp <= 1.0);
  }
  ExperimentConfig threaded = c;
  threaded.threads = 3;
  const ExperimentResult two = run_experiment(threaded);
  for (std::size_t k = 0; k < one.rows.size(); ++k) {
    CHECK(one.rows[k].fwer == two.rows[k].fwer);
    CHECK(one.rows[k].power == two.rows[k].power);
    CHECK(one.rows[k].power_se == two.rows[k].power_se);
    CHECK(one.rows[k].fdp == two.rows[k].fdp);
  }
}

TEST_CASE("step-down power is at least single-step power", "[simulation]") {
  ExperimentConfig c = small_config();
  c.stats = {StatKind::Student};
  c.procedures = {{Method::Sidak, false}, {Method::Sidak, true}, {Method::MaxT, false}, {Method::MaxT, true}};
  const ExperimentResult r = run_experiment(c);
  CHECK(*r.rows[1].power >= *r.rows[0].power);
  CHECK(*r.rows[3].power >= *r.rows[2].power);
}

TEST_CASE("full null has no power column", "[simulation]") {
  ExperimentConfig c = small_config();
  c.p_intra = 0.0;
  c.p_inter = {0.0};
  c.procedures = {{Method::Sidak, false}};
  c.stats = {StatKind::Fisher};
  c.replicates = 200;
  c.n = {300};
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.rows.size() == 1);
  CHECK_FALSE(r.rows[0].power.has_value());
  CHECK(r.rows[0].fwer <= 0.05 + 3 * std::sqrt(0.05 * 0.95 / 200));
  CHECK(r.rows[0].fdp == r.rows[0].fwer);
}

TEST_CASE("per-replicate adjacency redraw", "[simulation]") {
  ExperimentConfig c = small_config();
  c.redraw_adjacency = true;
  c.procedures = {{Method::Bonferroni, false}, {Method::OracleMaxT, false}};
  const ExperimentResult a = run_experiment(c);
  c.threads = 2;
  const ExperimentResult b = run_experiment(c);
  for (std::size_t k = 0; k < a.rows.size(); ++k) CHECK(a.rows[k].power == b.rows[k].power);
}

TEST_CASE("correlation histograms", "[simulation]") {
  ExperimentConfig c = small_config();
  c.histogram_bins = 20;
  c.n = {60, 200};
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.histograms.size() == 2);
  for (const auto& h : r.histograms) {
    const auto nulls = std::accumulate(h.null_counts.begin(), h.null_counts.end(), std::uint64_t{0});
    const auto alts = std::accumulate(h.alternative_counts.begin(), h.alternative_counts.end(), std::uint64_t{0});
    CHECK(nulls + alts == 12u * 28u);
  }
  CHECK(r.histograms[0].n == 60);
  CHECK(r.histograms[1].n == 200);
}

TEST_CASE("impossible models are reported", "[simulation]") {
  ExperimentConfig c = small_config();
  // Complete bipartite K(4,4) has lambda_min = -4.
  c.p_intra = 0.0;
  c.p_inter = {1.0};
  c.rho = {0.5};
  c.adjacency_attempts = 3;
  CHECK_THROWS_AS(run_experiment(c), ModelError);
}

TEST_CASE("full null with Fisher and step-down Sidak rejects almost nothing", "[simulation][mc]") {
  const CorrelationMatrix id = CorrelationMatrix::identity(26);
  int at_most_two = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    const SampleMatrix x = sample_gaussian(id, 122, derive_seed(77, {std::uint64_t(s)}));
    at_most_two += run_procedure({Method::Sidak, true}, statistic(x, StatKind::Fisher), {}, 0.05).size() <= 2;
  }
  CHECK(at_most_two >= 0.95 * seeds);
}
