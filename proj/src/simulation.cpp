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

#include "corrgraph/simulation.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "corrgraph/error.hpp"
#include "corrgraph/parallel.hpp"
#include "corrgraph/quantiles.hpp"
#include "corrgraph/rng.hpp"

namespace corrgraph {

void AdjacencyMatrix::set_edge(int i, int j, bool present) {
  if (i < 0 || j < 0 || i >= p_ || j >= p_ || i == j) {
    throw IndexError("invalid edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  cells_[index(i, j)] = cells_[index(j, i)] = present ? 1 : 0;
}

std::size_t AdjacencyMatrix::edge_count() const {
  std::size_t count = 0;
  for (int i = 0; i < p_; ++i)
    for (int j = i + 1; j < p_; ++j) count += cells_[index(i, j)];
  return count;
}

double AdjacencyMatrix::density() const {
  const std::size_t m = pair_count(p_);
  return m == 0 ? 0.0 : static_cast<double>(edge_count()) / static_cast<double>(m);
}

Matrix AdjacencyMatrix::to_matrix() const {
  Matrix a(p_, p_);
  for (int i = 0; i < p_; ++i)
    for (int j = 0; j < p_; ++j) a(i, j) = cells_[index(i, j)];
  return a;
}

namespace {

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

AdjacencyMatrix sbm_adjacency(int p, double p_intra, double p_inter, std::uint64_t seed) {
  if (p < 2 || p % 2 != 0) throw ConfigError("p must be even and at least 2, got " + std::to_string(p));
  check_probability(p_intra, "p_intra");
  check_probability(p_inter, "p_inter");
  const int half = p / 2;
  AdjacencyMatrix a(p);
  RandomStream rng(seed, StreamPurpose::Adjacency);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      const double prob = ((i < half) == (j < half)) ? p_intra : p_inter;
      a.set_edge(i, j, rng.uniform() < prob);
    }
  }
  return a;
}

std::size_t CorrelationModel::alternative_count() const {
  std::size_t count = 0;
  for (auto v : alternative) count += v;
  return count;
}

CorrelationModel correlation_model(const AdjacencyMatrix& adjacency, double rho) {
  if (!std::isfinite(rho)) throw ConfigError("rho must be finite");
  const int p = adjacency.p();
  const Matrix a = adjacency.to_matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues()(0);
  const double lambda_max = eig.eigenvalues()(p - 1);
  // Eigenvalues of I + rho A are 1 + rho lambda.
  const double extreme = rho >= 0.0 ? -lambda_min : lambda_max;
  const double bound = extreme > 0.0 ? 1.0 / extreme : std::numeric_limits<double>::infinity();
  if (!(std::abs(rho) < bound)) {
    throw ModelError("I + rho A is not positive definite for rho = " + std::to_string(rho) +
                         "; need |rho| < " + std::to_string(bound),
                     bound);
  }
  Matrix gamma = Matrix::Identity(p, p) + rho * a;
  Eigen::LLT<Matrix> llt(gamma);
  if (llt.info() != Eigen::Success) {
    throw ModelError("Cholesky factorization of I + rho A failed", bound);
  }
  CorrelationModel model{CorrelationMatrix(std::move(gamma)), rho, adjacency, lambda_min, bound, {}};
  model.alternative.assign(pair_count(p), 0);
  if (rho != 0.0) {
    std::size_t h = 0;
    for (int i = 0; i < p; ++i)
      for (int j = i + 1; j < p; ++j, ++h) model.alternative[h] = adjacency(i, j) ? 1 : 0;
  }
  return model;
}

SampleMatrix sample_gaussian(const CorrelationMatrix& gamma, int n, std::uint64_t seed,
                             int threads) {
  if (n < 1) throw ConfigError("n must be positive");
  const int p = gamma.p();
  Eigen::LLT<Matrix> llt(gamma.values());
  if (llt.info() != Eigen::Success) throw NotPsdError("model correlation is not positive definite");
  const Matrix lower = llt.matrixL();
  Matrix data(n, p);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t row) {
    RandomStream rng(seed, StreamPurpose::GaussianSample, static_cast<std::uint32_t>(row));
    Eigen::VectorXd xi(p);
    rng.fill_normal({xi.data(), static_cast<std::size_t>(p)});
    const Eigen::VectorXd y = lower.triangularView<Eigen::Lower>() * xi;
    data.row(static_cast<Eigen::Index>(row)) = y.transpose();
  });
  return SampleMatrix(std::move(data));
}

SampleMatrix sample_gaussian(const CorrelationModel& model, int n, std::uint64_t seed, int threads) {
  return sample_gaussian(model.gamma, n, seed, threads);
}

ReplicateMetrics metrics(const RejectionSet& rejection, std::span<const std::uint8_t> alternative) {
  std::size_t true_hits = 0;
  std::size_t false_hits = 0;
  for (std::uint32_t h : rejection.rejected) {
    if (h >= alternative.size()) throw IndexError("rejected pair outside the hypothesis set");
    (alternative[h] ? true_hits : false_hits) += 1;
  }
  std::size_t h1 = 0;
  for (auto v : alternative) h1 += v;
  ReplicateMetrics out;
  out.false_rejection = false_hits > 0;
  if (h1 > 0) out.tdp = static_cast<double>(true_hits) / static_cast<double>(h1);
  const std::size_t denom = rejection.size() > 0 ? rejection.size() : 1;
  out.fdp = static_cast<double>(false_hits) / static_cast<double>(denom);
  return out;
}

void ExperimentConfig::validate() const {
  if (p < 2 || p % 2 != 0) throw ConfigError("p: must be even and at least 2");
  check_probability(p_intra, "p_intra");
  if (p_inter.empty()) throw ConfigError("p_inter: at least one value required");
  for (double v : p_inter) check_probability(v, "p_inter");
  if (rho.empty()) throw ConfigError("rho: at least one value required");
  for (double v : rho)
    if (!std::isfinite(v) || std::abs(v) >= 1.0) throw ConfigError("rho: values must lie in (-1, 1)");
  if (n.empty()) throw ConfigError("n: at least one value required");
  for (int v : n)
    if (v < kMinObservations)
      throw ConfigError("n: values must be at least " + std::to_string(kMinObservations));
  if (stats.empty()) throw ConfigError("stats: at least one statistic required");
  if (procedures.empty()) throw ConfigError("procedures: at least one procedure required");
  for (const auto& proc : procedures)
    if (proc.method == Method::BH && proc.stepdown)
      throw ConfigError("procedures: bh has no step-down variant");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha: must lie in (0, 1)");
  if (replicates < 1) throw ConfigError("replicates: must be at least 1");
  if (bootrw_draws < 50) throw ConfigError("bootrw_draws: must be at least 50");
  if (maxt_draws < 100) throw ConfigError("maxt_draws: must be at least 100");
  if (threads < 0) throw ConfigError("threads: must be non-negative");
  if (adjacency_attempts < 1) throw ConfigError("adjacency_attempts: must be at least 1");
  if (histogram_bins < 0) throw ConfigError("histogram_bins: must be non-negative");
}

namespace {

// Domain tags for derive_seed paths.
constexpr std::uint64_t kTagAdjacency = 0xad1;
constexpr std::uint64_t kTagData = 0xda7a;
constexpr std::uint64_t kTagBoot = 0xb007;
constexpr std::uint64_t kTagMaxT = 0x3a47;
constexpr std::uint64_t kTagOracle = 0x0ac1e;

CorrelationModel first_definite(const ExperimentConfig& config, double p_inter, double rho,
                                const std::function<std::uint64_t(std::uint64_t)>& seed_of) {
  std::optional<ModelError> last;
  for (int attempt = 0; attempt < config.adjacency_attempts; ++attempt) {
    const AdjacencyMatrix a =
        sbm_adjacency(config.p, config.p_intra, p_inter, seed_of(static_cast<std::uint64_t>(attempt)));
    try {
      return correlation_model(a, rho);
    } catch (const ModelError& e) {
      last = e;
    }
  }
  throw ModelError("no positive definite adjacency in " + std::to_string(config.adjacency_attempts) +
                       " draws at rho = " + std::to_string(rho) + ": " + last->what(),
                   last->rho_bound());
}

// Oracle factors are shared by all replicates of a fixed model.
class OracleCache {
 public:
  explicit OracleCache(const CorrelationModel& model) : model_(model) {}

  const CholeskyFactor& get(StatKind kind) {
    auto& slot = factors_[static_cast<int>(kind)];
    if (!slot) slot = cholesky_psd(omega_gaussian(model_.gamma, kind).values);
    return *slot;
  }

 private:
  const CorrelationModel& model_;
  std::map<int, std::optional<CholeskyFactor>> factors_;
};

struct ReplicateOutcome {
  bool ok = false;
  // [stat][procedure]
  std::vector<std::vector<ReplicateMetrics>> cells;
  std::vector<std::uint64_t> null_counts;
  std::vector<std::uint64_t> alternative_counts;
};

int histogram_bin(double r, int bins) {
  const int k = static_cast<int>(std::floor((r + 1.0) * 0.5 * bins));
  return std::clamp(k, 0, bins - 1);
}

ReplicateOutcome run_replicate(const ExperimentConfig& config, const CorrelationModel& model,
                               OracleCache* oracle, int n, std::uint64_t data_seed) {
  const SampleMatrix samples = sample_gaussian(model, n, data_seed);
  const CorrelationMatrix gamma_hat = empirical_correlation(samples);
  std::unique_ptr<FourthMoments> moments;
  std::optional<OracleCache> local_oracle;
  if (!oracle) oracle = &local_oracle.emplace(model);

  ReplicateOutcome out;
  out.cells.resize(config.stats.size());
  for (std::size_t s = 0; s < config.stats.size(); ++s) {
    const StatKind kind = config.stats[s];
    const auto kind_tag = static_cast<std::uint64_t>(kind);
    const StatVector stats = kind == StatKind::SecondOrder
                                 ? statistic(samples, kind)
                                 : statistic_from_correlation(gamma_hat, kind, n);
    std::optional<DrawMatrix> boot, maxt, oracle_draws;
    for (const ProcedureKind& proc : config.procedures) {
      ProcedureContext context;
      switch (proc.method) {
        case Method::BootRW:
          if (!boot)
            boot.emplace(bootstrap_draws(samples, kind, config.bootrw_draws,
                                         derive_seed(data_seed, {kTagBoot, kind_tag})));
          context.draws = &*boot;
          break;
        case Method::MaxT:
          if (!maxt) {
            Matrix omega;
            if (config.fourth_moment_plugin) {
              if (!moments) moments = std::make_unique<FourthMoments>(fourth_moments(samples));
              omega = omega_general(*moments, kind).values;
            } else {
              omega = omega_gaussian(saturated(gamma_hat), kind).values;
            }
            maxt.emplace(gaussian_draws(cholesky_psd(omega), config.maxt_draws,
                                        derive_seed(data_seed, {kTagMaxT, kind_tag})));
          }
          context.draws = &*maxt;
          break;
        case Method::OracleMaxT:
          if (!oracle_draws)
            oracle_draws.emplace(gaussian_draws(oracle->get(kind), config.maxt_draws,
                                                derive_seed(data_seed, {kTagOracle, kind_tag})));
          context.draws = &*oracle_draws;
          break;
        default:
          break;
      }
      const RejectionSet rejection = run_procedure(proc, stats, context, config.alpha);
      out.cells[s].push_back(metrics(rejection, model.alternative));
    }
  }

  if (config.histogram_bins > 0) {
    out.null_counts.assign(static_cast<std::size_t>(config.histogram_bins), 0);
    out.alternative_counts.assign(static_cast<std::size_t>(config.histogram_bins), 0);
    const std::vector<double> r = gamma_hat.pair_values();
    for (std::size_t h = 0; h < r.size(); ++h) {
      auto& counts = model.alternative[h] ? out.alternative_counts : out.null_counts;
      ++counts[static_cast<std::size_t>(histogram_bin(r[h], config.histogram_bins))];
    }
  }
  out.ok = true;
  return out;
}

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double stderr_of_mean() const {
    if (count < 2) return 0.0;
    const double c = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
    return std::sqrt(var / c);
  }
};

}  // namespace

CorrelationModel draw_model(const ExperimentConfig& config, std::size_t p_inter_index, double rho,
                            std::uint64_t seed) {
  return first_definite(config, config.p_inter.at(p_inter_index), rho, [&](std::uint64_t attempt) {
    return derive_seed(seed, {kTagAdjacency, p_inter_index, attempt});
  });
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const int threads = resolve_threads(config.threads);
  const auto reps = static_cast<std::size_t>(config.replicates);
  ExperimentResult result;

  for (std::size_t pi = 0; pi < config.p_inter.size(); ++pi) {
    for (std::size_t ri = 0; ri < config.rho.size(); ++ri) {
      const double rho = config.rho[ri];
      std::optional<CorrelationModel> fixed;
      std::optional<OracleCache> fixed_oracle;
      if (!config.redraw_adjacency) {
        fixed.emplace(draw_model(config, pi, rho, config.seed));
        fixed_oracle.emplace(*fixed);
        // Fill the cache up front so workers only read it.
        for (const auto& proc : config.procedures)
          if (proc.method == Method::OracleMaxT)
            for (StatKind kind : config.stats) fixed_oracle->get(kind);
      }

      for (std::size_t ni = 0; ni < config.n.size(); ++ni) {
        const int n = config.n[ni];
        std::vector<ReplicateOutcome> outcomes(reps);
        parallel_for(reps, threads, [&](std::size_t r) {
          std::optional<CorrelationModel> own;
          if (!fixed) {
            own.emplace(first_definite(config, config.p_inter[pi], rho, [&](std::uint64_t attempt) {
              return derive_seed(config.seed, {kTagAdjacency, pi, r, attempt});
            }));
          }
          const CorrelationModel& model = fixed ? *fixed : *own;
          OracleCache* oracle = fixed ? &*fixed_oracle : nullptr;
          for (int attempt = 0; attempt <= kReplicateRetries; ++attempt) {
            const std::uint64_t data_seed =
                derive_seed(config.seed, {kTagData, pi, ri, ni, r, static_cast<std::uint64_t>(attempt)});
            try {
              outcomes[r] = run_replicate(config, model, oracle, n, data_seed);
              return;
            } catch (const DegenerateInputError&) {
            } catch (const SingularityError&) {
            } catch (const NotPsdError&) {
            }
          }
        });

        bool failed = false;
        for (const auto& o : outcomes) failed = failed || !o.ok;

        for (std::size_t s = 0; s < config.stats.size(); ++s) {
          for (std::size_t q = 0; q < config.procedures.size(); ++q) {
            MetricsRow row;
            row.stat = config.stats[s];
            row.procedure = config.procedures[q];
            row.n = n;
            row.p_inter = config.p_inter[pi];
            row.rho = rho;
            row.failed = failed;
            Moments fwer, power, fdp;
            for (const auto& o : outcomes) {
              if (!o.ok) continue;
              const ReplicateMetrics& m = o.cells[s][q];
              fwer.add(m.false_rejection ? 1.0 : 0.0);
              if (m.tdp) power.add(*m.tdp);
              fdp.add(m.fdp);
            }
            row.replicates = static_cast<int>(fwer.count);
            if (!failed && fwer.count > 0) {
              row.fwer = fwer.mean();
              row.fwer_se = fwer.stderr_of_mean();
              row.fdp = fdp.mean();
              row.fdp_se = fdp.stderr_of_mean();
              if (power.count > 0) {
                row.power = power.mean();
                row.power_se = power.stderr_of_mean();
              }
            }
            result.rows.push_back(row);
          }
        }

        if (config.histogram_bins > 0) {
          CorrelationHistogram hist;
          hist.n = n;
          hist.p_inter = config.p_inter[pi];
          hist.rho = rho;
          hist.null_counts.assign(static_cast<std::size_t>(config.histogram_bins), 0);
          hist.alternative_counts.assign(static_cast<std::size_t>(config.histogram_bins), 0);
          for (const auto& o : outcomes) {
            if (!o.ok) continue;
            for (std::size_t b = 0; b < hist.null_counts.size(); ++b) {
              hist.null_counts[b] += o.null_counts[b];
              hist.alternative_counts[b] += o.alternative_counts[b];
            }
          }
          result.histograms.push_back(std::move(hist));
        }
      }
    }
  }
  return result;
}

}  // namespace corrgraph
