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

// Command-line front end. Exit codes:
//   0 success, 1 bad flags or config, 2 malformed CSV, 3 degenerate column,
//   4 model not positive definite, 5 covariance not symmetric PSD.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"

#include "corrgraph/config.hpp"
#include "corrgraph/core.hpp"
#include "corrgraph/error.hpp"
#include "corrgraph/io.hpp"
#include "corrgraph/parallel.hpp"
#include "corrgraph/procedures.hpp"
#include "corrgraph/quantiles.hpp"
#include "corrgraph/rng.hpp"
#include "corrgraph/simulation.hpp"
#include "corrgraph/statistics.hpp"

namespace {

using namespace corrgraph;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kMalformedCsv = 2,
  kDegenerate = 3,
  kNotDefinite = 4,
  kNotPsd = 5,
};

constexpr std::uint64_t kTagTestDraws = 0x7e57;

struct TestOptions {
  std::string input;
  std::string stat = "fisher";
  std::string method = "sidak";
  bool stepdown = false;
  double alpha = 0.05;
  std::optional<std::size_t> draws;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string output;
  std::string graph;
  std::string graph_format;
  std::string covariance = "gaussian";
};

struct SimulateOptions {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> reps;
};

struct ModelOptions {
  int p = 26;
  double p_intra = 0.6;
  double p_inter = 0.01;
  double rho = 0.2;
  std::uint64_t seed = 1;
  std::string output;
};

struct SampleOptions {
  std::string correlation;
  int n = 100;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string output;
};

struct QuantileOptions {
  std::string sigma;
  double alpha = 0.05;
  std::size_t draws = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
};

// Column names survive into the degenerate-column message.
std::vector<std::string> g_names;

int cmd_test(const TestOptions& o) {
  const DataTable table = read_csv_file(o.input, true);
  g_names = table.names;
  const SampleMatrix samples(table.values);
  const StatKind kind = *parse_stat_kind(o.stat);
  const Method method = *parse_method(o.method);
  const int threads = resolve_threads(o.threads);

  if (method == Method::OracleMaxT)
    throw ConfigError("--method oraclemaxt needs the true correlation and is only available in simulate");
  if (method == Method::BH && o.stepdown) throw ConfigError("--step-down is not defined for bh");
  if (o.draws && !uses_draws(method))
    throw ConfigError("--draws only applies to bootrw and maxt");
  if (o.covariance != "gaussian" && method != Method::MaxT)
    throw ConfigError("--covariance only applies to maxt");

  const StatVector stats = statistic(samples, kind);
  const std::uint64_t draw_seed = derive_seed(o.seed, {kTagTestDraws, static_cast<std::uint64_t>(kind)});
  std::optional<DrawMatrix> draws;
  if (method == Method::BootRW) {
    const std::size_t b = o.draws.value_or(100);
    if (b < 50) throw ConfigError("--draws must be at least 50 for bootrw");
    draws.emplace(bootstrap_draws(samples, kind, b, draw_seed, threads));
  } else if (method == Method::MaxT) {
    const std::size_t b = o.draws.value_or(1000);
    if (b < 100) throw ConfigError("--draws must be at least 100 for maxt");
    const PairCovariance omega =
        o.covariance == "fourth-moment"
            ? omega_general(fourth_moments(samples), kind, threads)
            : omega_gaussian(saturated(empirical_correlation(samples)), kind, threads);
    draws.emplace(gaussian_draws(omega.values, b, draw_seed, threads));
  }
  ProcedureContext context;
  if (draws) context.draws = &*draws;
  const RejectionSet rejection = run_procedure({method, o.stepdown}, stats, context, o.alpha);
  const auto records = edge_records(table.names, stats, rejection);

  std::ostringstream edges;
  write_edges_csv(edges, records);
  write_file(o.output, edges.str());

  if (!o.graph.empty() || !o.graph_format.empty()) {
    const std::string format = o.graph_format.empty() ? "edgelist" : o.graph_format;
    const std::string path =
        o.graph.empty() ? o.output + (format == "dot" ? ".dot" : ".edges.csv") : o.graph;
    std::ostringstream graph;
    if (format == "dot") {
      write_edges_dot(graph, table.names, records);
    } else {
      graph << "i,j,name_i,name_j\n";
      for (const auto& r : records)
        if (r.rejected) graph << r.i << ',' << r.j << ',' << r.name_i << ',' << r.name_j << '\n';
    }
    write_file(path, graph.str());
  }

  fmt::print("n: {}\np: {}\nm: {}\nstatistic: {}\nprocedure: {}{}\nalpha: {}\n", samples.n(),
             samples.p(), stats.size(), to_string(kind), to_string(method),
             o.stepdown ? " step-down" : "", format_double(o.alpha));
  if (draws) fmt::print("draws: {}\n", draws->rows());
  fmt::print("rounds: {}\nrejected: {}\n", rejection.iterations, rejection.size());
  return kOk;
}

int cmd_simulate(const SimulateOptions& o) {
  RunConfig config = load_run_config(o.config);
  ExperimentConfig& e = config.experiment;
  if (o.seed) e.seed = *o.seed;
  if (o.threads) e.threads = *o.threads;
  if (o.reps) e.replicates = *o.reps;
  e.validate();
  const ExperimentResult result = run_experiment(e);

  std::ostringstream csv;
  write_metrics_csv(csv, result.rows);
  write_file(o.output, csv.str());
  if (config.histogram_output) {
    std::ostringstream hist;
    write_histograms_csv(hist, result.histograms);
    write_file(*config.histogram_output, hist.str());
  }
  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.failed ? 1 : 0;
  fmt::print("rows: {}\nreplicates: {}\nfailed rows: {}\n", result.rows.size(), e.replicates, failed);
  return kOk;
}

std::vector<std::string> default_names(int p) {
  std::vector<std::string> names;
  for (int k = 1; k <= p; ++k) names.push_back("V" + std::to_string(k));
  return names;
}

int cmd_model(const ModelOptions& o) {
  const AdjacencyMatrix adjacency = sbm_adjacency(o.p, o.p_intra, o.p_inter, o.seed);
  const Matrix a = adjacency.to_matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues()(0);
  const double lambda_max = eig.eigenvalues()(o.p - 1);
  const auto names = default_names(o.p);
  fmt::print("edges: {} of {}\nlambda_min: {}\nlambda_max: {}\n", adjacency.edge_count(),
             pair_count(o.p), format_double(lambda_min), format_double(lambda_max));
  try {
    const CorrelationModel model = correlation_model(adjacency, o.rho);
    fmt::print("rho_bound: {}\n", format_double(model.rho_bound));
    std::ostringstream adj, corr;
    write_matrix_csv(adj, a, names);
    write_matrix_csv(corr, model.gamma.values(), names);
    write_file(o.output + ".adjacency.csv", adj.str());
    write_file(o.output + ".correlation.csv", corr.str());
  } catch (const ModelError&) {
    const std::string lo = lambda_max > 0.0 ? format_double(-1.0 / lambda_max) : "-1";
    const std::string hi = lambda_min < 0.0 ? format_double(-1.0 / lambda_min) : "1";
    std::cerr << fmt::format("error: I + rho A is not positive definite at rho = {}; admissible range is ({}, {})\n",
                             format_double(o.rho), lo, hi);
    return kNotDefinite;
  }
  return kOk;
}

int cmd_sample(const SampleOptions& o) {
  const DataTable table = read_matrix_csv_file(o.correlation);
  const CorrelationMatrix gamma = CorrelationMatrix::model(table.values);
  const SampleMatrix samples = sample_gaussian(gamma, o.n, o.seed, resolve_threads(o.threads));
  std::ostringstream csv;
  write_matrix_csv(csv, samples.data(), table.names);
  write_file(o.output, csv.str());
  return kOk;
}

int cmd_quantile(const QuantileOptions& o) {
  const DataTable table = read_matrix_csv_file(o.sigma);
  const auto m = static_cast<std::size_t>(table.values.rows());
  const QuantileEstimate q =
      max_gauss_quantile({table.values, StatKind::Empirical, CovarianceSource::Oracle}, o.alpha,
                         o.draws, full_subset(m), o.seed, resolve_threads(o.threads));
  fmt::print("quantile: {}\nalpha: {}\ndraws: {}\nseed: {}\nm: {}\n", format_double(q.value),
             format_double(q.alpha), q.draws, q.seed, m);
  return kOk;
}

int report(const std::string& message, int code) {
  std::cerr << "error: " << message << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrgraph: correlation graph inference with multiple testing control"};
  app.require_subcommand(1);

  std::vector<std::string> stat_names, method_names;
  for (StatKind k : kAllStatKinds) stat_names.emplace_back(to_string(k));
  for (Method m : kAllMethods) method_names.emplace_back(to_string(m));

  TestOptions test;
  std::size_t test_draws = 0;
  auto* t = app.add_subcommand("test", "Test every pair of columns of a data file");
  t->add_option("--input", test.input, "CSV with a header row, one column per variable")->required();
  t->add_option("--stat", test.stat, "Test statistic")->check(CLI::IsMember(stat_names));
  t->add_option("--method", test.method, "Multiple testing procedure")->check(CLI::IsMember(method_names));
  t->add_flag("--step-down", test.stepdown, "Iterate on the non-rejected pairs");
  t->add_option("--alpha", test.alpha, "Level")->check(CLI::Range(0.0, 1.0));
  auto* draws_opt = t->add_option("--draws", test_draws, "Resampling draws (bootrw 100, maxt 1000)");
  t->add_option("--seed", test.seed, "Seed for resampling");
  t->add_option("--threads", test.threads, "Worker threads (0: CORRGRAPH_THREADS or 1)")->check(CLI::NonNegativeNumber);
  t->add_option("--output", test.output, "Edge CSV to write")->required();
  t->add_option("--graph", test.graph, "Graph file of rejected edges");
  t->add_option("--graph-format", test.graph_format, "edgelist or dot")->check(CLI::IsMember({"edgelist", "dot"}));
  t->add_option("--covariance", test.covariance, "maxt covariance: gaussian or fourth-moment")
      ->check(CLI::IsMember({"gaussian", "fourth-moment"}));

  SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  int sim_threads = 0, sim_reps = 0;
  auto* s = app.add_subcommand("simulate", "Monte Carlo study from a JSON config");
  s->add_option("--config", sim.config, "JSON run config")->required();
  s->add_option("--output", sim.output, "Metrics CSV to write")->required();
  auto* sim_seed_opt = s->add_option("--seed", sim_seed, "Override the master seed");
  auto* sim_threads_opt = s->add_option("--threads", sim_threads, "Override the thread count")->check(CLI::NonNegativeNumber);
  auto* sim_reps_opt = s->add_option("--reps", sim_reps, "Override the replicate count")->check(CLI::PositiveNumber);

  ModelOptions model;
  auto* md = app.add_subcommand("model", "Draw a block model and write I + rho A");
  md->add_option("--p", model.p, "Number of variables (even)");
  md->add_option("--p-intra", model.p_intra, "Edge probability inside a block");
  md->add_option("--p-inter", model.p_inter, "Edge probability across blocks");
  md->add_option("--rho", model.rho, "Edge correlation");
  md->add_option("--seed", model.seed, "Adjacency seed");
  md->add_option("--output", model.output,
                 "Prefix; writes PREFIX.adjacency.csv and PREFIX.correlation.csv")->required();

  SampleOptions sample;
  auto* sp = app.add_subcommand("sample", "Draw Gaussian rows from a correlation matrix");
  sp->add_option("--correlation", sample.correlation, "Correlation matrix CSV")->required();
  sp->add_option("--n", sample.n, "Rows")->check(CLI::PositiveNumber);
  sp->add_option("--seed", sample.seed, "Seed");
  sp->add_option("--threads", sample.threads, "Worker threads")->check(CLI::NonNegativeNumber);
  sp->add_option("--output", sample.output, "Data CSV to write")->required();

  QuantileOptions quant;
  auto* q = app.add_subcommand("quantile", "Quantile of max |X| for X ~ N(0, Sigma)");
  q->add_option("--sigma", quant.sigma, "Covariance matrix CSV")->required();
  q->add_option("--alpha", quant.alpha, "Level")->check(CLI::Range(0.0, 1.0));
  q->add_option("--draws", quant.draws, "Gaussian draws");
  q->add_option("--seed", quant.seed, "Seed");
  q->add_option("--threads", quant.threads, "Worker threads")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*t) {
      if (*draws_opt) test.draws = test_draws;
      return cmd_test(test);
    }
    if (*s) {
      if (*sim_seed_opt) sim.seed = sim_seed;
      if (*sim_threads_opt) sim.threads = sim_threads;
      if (*sim_reps_opt) sim.reps = sim_reps;
      return cmd_simulate(sim);
    }
    if (*md) return cmd_model(model);
    if (*sp) return cmd_sample(sample);
    if (*q) return cmd_quantile(quant);
  } catch (const ParseError& e) {
    return report(fmt::format("line {}: {}", e.line(), e.what()), kMalformedCsv);
  } catch (const DegenerateInputError& e) {
    if (e.column() >= 0 && static_cast<std::size_t>(e.column()) < g_names.size())
      return report(fmt::format("column '{}' (index {}): {}", g_names[static_cast<std::size_t>(e.column())],
                                e.column() + 1, e.what()),
                    kDegenerate);
    return report(e.what(), kDegenerate);
  } catch (const SingularityError& e) {
    return report(e.what(), kDegenerate);
  } catch (const ModelError& e) {
    return report(fmt::format("{} (bound {})", e.what(), format_double(e.rho_bound())), kNotDefinite);
  } catch (const NotPsdError& e) {
    return report(e.what(), kNotPsd);
  } catch (const std::exception& e) {
    return report(e.what(), kUsage);
  }
  return kUsage;
}
