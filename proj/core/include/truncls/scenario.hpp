#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "truncls/estimators.hpp"
#include "truncls/synthetic.hpp"

namespace truncls {

/// One benchmark scenario: a design/noise pair run for a number of seeded
/// replications, comparing the truncated fit with ordinary least squares.
struct ScenarioConfig {
  DesignKind design = DesignKind::kInc;
  Eigen::Index n = 200;
  Eigen::Index d = 1;
  NoiseSpec noise;
  double noise_sigma = 10.0;
  int replications = 1000;
  std::uint64_t base_seed = 0;
  double lambda = 0.0;
  AlphaGrid grid;  ///< center is recomputed per replication from the data
  std::vector<int> eta_ranks = {1, 5, 25};
  /// Global index of the first replication; replication r always reads the
  /// stream Rng::child(base_seed, r), so runs over subranges merge exactly.
  int first_replication = 0;
  int threads = 0;  ///< 0 = hardware concurrency
};

struct ReplicationOutcome {
  bool failed = false;
  bool differs = false;  ///< truncated fit differs from the empirical minimizer
  double excess_ols = 0.0;
  double excess_trunc = 0.0;
  int removed = 0;  ///< points outside the final support
};

/// Mean with a 95% normal-approximation half-width 1.96 * sd / sqrt(m).
/// count < 2 marks a degenerate interval (half_width 0).
struct CiValue {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double half_width = 0.0;
  int count = 0;

  bool degenerate() const { return count < 2; }
};

CiValue summarize_ci(std::span<const double> samples);

/// One output-table row.
struct ScenarioSummary {
  int replications = 0;
  int failures = 0;
  int n_differ = 0;  ///< replications whose truncated fit left the minimizer
  int n_better = 0;  ///< differing replications with strictly smaller excess risk
  CiValue excess_ols;
  CiValue excess_trunc;
  CiValue cond_excess_ols;    ///< over differing replications
  CiValue cond_excess_trunc;  ///< over differing replications
  double mean_removed = std::numeric_limits<double>::quiet_NaN();
};

/// Runs the replications deterministically; entry r only depends on
/// (base_seed, first_replication + r). Failures are recorded in place.
std::vector<ReplicationOutcome> run_replications(const ScenarioConfig& config);

ScenarioSummary summarize_scenario(std::span<const ReplicationOutcome> outcomes);

ScenarioSummary run_scenario(const ScenarioConfig& config);

/// The 14 (design, n, d) rows shared by the benchmark tables.
struct TableRow {
  DesignKind design;
  Eigen::Index n;
  Eigen::Index d;
};

std::span<const TableRow> table_rows();

/// Noise spec of a table suite (1-5): mixture rho=0.1, mixture rho=0.4,
/// heavy-tailed, asymmetric heavy-tailed, Gaussian. All use sigma = 10.
NoiseSpec table_noise(int suite);

/// Scenario configs for a full suite; row r of a run seeded with s uses base
/// seed Rng::derive(s, r).
std::vector<ScenarioConfig> table_suite(int suite, int replications,
                                        std::uint64_t seed);

}  // namespace truncls
