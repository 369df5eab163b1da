#include "truncls/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace truncls {

CiValue summarize_ci(std::span<const double> samples) {
  CiValue ci;
  ci.count = static_cast<int>(samples.size());
  if (samples.empty()) return ci;
  double sum = 0.0;
  for (const double s : samples) sum += s;
  ci.mean = sum / static_cast<double>(samples.size());
  if (samples.size() < 2) return ci;
  double ss = 0.0;
  for (const double s : samples) {
    const double dev = s - ci.mean;
    ss += dev * dev;
  }
  const double m = static_cast<double>(samples.size());
  const double sd = std::sqrt(ss / (m - 1.0));
  ci.half_width = 1.96 * sd / std::sqrt(m);
  return ci;
}

std::vector<ReplicationOutcome> run_replications(const ScenarioConfig& config) {
  config.noise.validate();
  if (config.replications < 1) {
    throw std::invalid_argument("scenario: replications must be at least 1");
  }
  if (config.n < 1 || config.d < 1) {
    throw std::invalid_argument("scenario: n and d must be positive");
  }

  std::vector<ReplicationOutcome> outcomes(
      static_cast<std::size_t>(config.replications));

  auto run_range = [&](int lo, int hi) {
    for (int r = lo; r < hi; ++r) {
      const auto stream =
          static_cast<std::uint64_t>(config.first_replication + r);
      Rng rng = Rng::child(config.base_seed, stream);
      ReplicationOutcome& out = outcomes[static_cast<std::size_t>(r)];
      try {
        const DesignOracle oracle =
            build_oracle(config.design, config.n, config.d, config.noise, rng,
                         config.noise_sigma);
        const Dataset data = generate_dataset(oracle, rng);
        const Eigen::VectorXd ols = least_squares_fit(data);
        const FitResult fit = select_alpha_and_fit(data, config.lambda,
                                                   config.grid, config.eta_ranks);
        out.differs = !fit.equals_erm;
        out.excess_ols = excess_risk(oracle, ols);
        out.excess_trunc = excess_risk(oracle, fit.theta);
        out.removed = static_cast<int>(data.n()) -
                      static_cast<int>(fit.support.size());
      } catch (...) {
        out.failed = true;
      }
    }
  };

  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, config.replications);
  if (threads == 1) {
    run_range(0, config.replications);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int chunk = (config.replications + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int lo = t * chunk;
      const int hi = std::min(config.replications, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (std::thread& worker : pool) worker.join();
  }
  return outcomes;
}

ScenarioSummary summarize_scenario(std::span<const ReplicationOutcome> outcomes) {
  ScenarioSummary summary;
  summary.replications = static_cast<int>(outcomes.size());

  std::vector<double> ols, trunc, cond_ols, cond_trunc;
  double removed_sum = 0.0;
  for (const ReplicationOutcome& out : outcomes) {
    if (out.failed) {
      ++summary.failures;
      continue;
    }
    ols.push_back(out.excess_ols);
    trunc.push_back(out.excess_trunc);
    if (out.differs) {
      ++summary.n_differ;
      cond_ols.push_back(out.excess_ols);
      cond_trunc.push_back(out.excess_trunc);
      removed_sum += static_cast<double>(out.removed);
      // Only a fit that moved away from the minimizer can beat it; ties and
      // identical fits never count.
      if (out.excess_trunc < out.excess_ols) ++summary.n_better;
    }
  }
  summary.excess_ols = summarize_ci(ols);
  summary.excess_trunc = summarize_ci(trunc);
  summary.cond_excess_ols = summarize_ci(cond_ols);
  summary.cond_excess_trunc = summarize_ci(cond_trunc);
  if (summary.n_differ > 0) {
    summary.mean_removed = removed_sum / static_cast<double>(summary.n_differ);
  }
  return summary;
}

ScenarioSummary run_scenario(const ScenarioConfig& config) {
  const auto outcomes = run_replications(config);
  return summarize_scenario(outcomes);
}

std::span<const TableRow> table_rows() {
  static constexpr TableRow kRows[] = {
      {DesignKind::kInc, 200, 1},   {DesignKind::kInc, 200, 2},
      {DesignKind::kHcc, 200, 2},   {DesignKind::kTs, 200, 2},
      {DesignKind::kInc, 1000, 2},  {DesignKind::kInc, 1000, 10},
      {DesignKind::kHcc, 1000, 10}, {DesignKind::kTs, 1000, 10},
      {DesignKind::kInc, 2000, 2},  {DesignKind::kHcc, 2000, 2},
      {DesignKind::kTs, 2000, 2},   {DesignKind::kInc, 2000, 10},
      {DesignKind::kHcc, 2000, 10}, {DesignKind::kTs, 2000, 10},
  };
  return kRows;
}

NoiseSpec table_noise(int suite) {
  NoiseSpec noise;
  switch (suite) {
    case 1:
      noise.kind = NoiseKind::kDiracGaussianMixture;
      noise.p = 0.005;
      noise.rho = 0.1;
      break;
    case 2:
      noise.kind = NoiseKind::kDiracGaussianMixture;
      noise.p = 0.005;
      noise.rho = 0.4;
      break;
    case 3:
      noise.kind = NoiseKind::kHeavyTailed;
      noise.q = 2.01;
      break;
    case 4:
      noise.kind = NoiseKind::kAsymHeavyTailed;
      noise.q = 2.01;
      break;
    case 5:
      noise.kind = NoiseKind::kGaussian;
      break;
    default:
      throw std::invalid_argument("table suite must be 1-5");
  }
  return noise;
}

std::vector<ScenarioConfig> table_suite(int suite, int replications,
                                        std::uint64_t seed) {
  const NoiseSpec noise = table_noise(suite);
  std::vector<ScenarioConfig> configs;
  std::uint64_t row_index = 0;
  for (const TableRow& row : table_rows()) {
    ScenarioConfig config;
    config.design = row.design;
    config.n = row.n;
    config.d = row.d;
    config.noise = noise;
    config.noise_sigma = 10.0;
    config.replications = replications;
    config.base_seed = Rng::derive(seed, row_index++);
    configs.push_back(std::move(config));
  }
  return configs;
}

}  // namespace truncls
