#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "truncls/csv.hpp"
#include "truncls/estimators.hpp"
#include "truncls/moments.hpp"
#include "truncls/scenario.hpp"
#include "truncls/synthetic.hpp"

namespace {

using namespace truncls;

const std::map<std::string, DesignKind> kDesignNames{
    {"inc", DesignKind::kInc}, {"hcc", DesignKind::kHcc}, {"ts", DesignKind::kTs}};

const std::map<std::string, NoiseKind> kNoiseNames{
    {"gauss", NoiseKind::kGaussian},
    {"heavy", NoiseKind::kHeavyTailed},
    {"asym", NoiseKind::kAsymHeavyTailed},
    {"mixture", NoiseKind::kDiracGaussianMixture}};

const std::map<std::string, int> kSuiteNames{{"table1", 1},
                                             {"table2", 2},
                                             {"table3", 3},
                                             {"table4", 4},
                                             {"table5", 5}};

void print_vector(const char* label, const Eigen::VectorXd& v) {
  std::printf("%s:", label);
  for (Eigen::Index i = 0; i < v.size(); ++i) std::printf(" %.10g", v[i]);
  std::printf("\n");
}

void print_fit(const FitResult& fit, Eigen::Index n, bool trace) {
  print_vector("theta", fit.theta);
  std::printf("alpha: %.10g\n", fit.alpha_used);
  std::printf("lambda: %.10g\n", fit.lambda_used);
  std::printf("iterations: %zu\n", fit.trace.size());
  std::printf("support: %zu / %lld\n", fit.support.size(),
              static_cast<long long>(n));
  std::printf("equals_erm: %s\n", fit.equals_erm ? "true" : "false");

  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (const Eigen::Index i : fit.support) kept[static_cast<std::size_t>(i)] = true;
  std::printf("removed:");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) std::printf(" %lld", static_cast<long long>(i));
  }
  std::printf("\n");

  if (trace) {
    for (std::size_t k = 0; k < fit.trace.size(); ++k) {
      const IterationRecord& rec = fit.trace[k];
      std::printf("iter %zu: |I|=%zu", k + 1, rec.support.size());
      if (rec.chosen) {
        std::printf(" chosen eta=%.10g ell=%d", rec.chosen->first, rec.chosen->second);
      }
      std::printf("\n");
    }
  }
}

int run_fit(const std::string& csv_path, double lambda, double alpha,
            bool alpha_set, const std::vector<double>& grid_spec,
            const std::vector<int>& eta_ranks, bool trace) {
  const Dataset data = read_dataset_csv(csv_path);
  FitResult fit;
  if (alpha_set) {
    fit = minmax_truncated_fit(data, {alpha, lambda}, eta_ranks);
  } else if (!grid_spec.empty()) {
    AlphaGrid grid;
    grid.center = grid_spec[0];
    grid.ratio = grid_spec[1];
    grid.count = static_cast<int>(grid_spec[2]);
    grid.first_offset = 1 - grid.count;  // grid ends at the given center
    fit = select_alpha_over_points(data, lambda, grid.points(), eta_ranks);
  } else {
    fit = select_alpha_and_fit(data, lambda, AlphaGrid{}, eta_ranks);
  }
  print_fit(fit, data.n(), trace);
  return 0;
}

int run_scenario_cmd(const ScenarioConfig& config, const std::string& out_path) {
  const ScenarioSummary summary = run_scenario(config);
  const std::string row = summary_csv_row(config, summary);
  append_summary_csv(out_path, row);
  std::printf("%s\n", row.c_str());
  if (summary.failures > 0) {
    std::fprintf(stderr, "warning: %d replication(s) failed\n", summary.failures);
  }
  return 0;
}

int run_table(int suite, int reps, std::uint64_t seed, const std::string& out_path,
              int threads) {
  for (ScenarioConfig& config : table_suite(suite, reps, seed)) {
    config.threads = threads;
    const ScenarioSummary summary = run_scenario(config);
    const std::string row = summary_csv_row(config, summary);
    append_summary_csv(out_path, row);
    std::printf("%s\n", row.c_str());
    if (summary.failures > 0) {
      std::fprintf(stderr, "warning: %d replication(s) failed\n", summary.failures);
    }
  }
  return 0;
}

int run_coefficients(const std::string& csv_path, double lambda,
                     double theta_radius, std::uint64_t seed, double c) {
  const Dataset data = read_dataset_csv(csv_path);
  const Eigen::VectorXd theta_ref = ridge_fit(data, lambda);
  const CoefficientSet coeffs =
      empirical_coefficients(data, theta_ref, lambda, theta_radius, seed);
  print_vector("theta_ref", theta_ref);
  std::printf("sigma: %.10g\n", coeffs.sigma);
  std::printf("chi: %.10g\n", coeffs.chi);
  std::printf("kappa: %.10g\n", coeffs.kappa);
  std::printf("kappa_prime: %.10g%s\n", coeffs.kappa_prime,
              coeffs.degenerate_residuals ? " (degenerate: zero residuals)" : "");
  std::printf("t_diameter: %.10g\n", coeffs.t_diameter);
  std::printf("effective_dimension: %.10g\n", coeffs.d_eff);
  try {
    std::printf("theoretical_alpha: %.10g (c=%.10g)\n",
                theoretical_alpha(coeffs, data.n(), c), c);
  } catch (const std::domain_error& err) {
    std::printf("theoretical_alpha: unavailable (%s)\n", err.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust linear least squares: min-max truncated estimator and benchmarks"};
  app.require_subcommand(1);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit the truncated estimator to a CSV dataset");
  std::string fit_csv;
  double fit_lambda = 0.0;
  double fit_alpha = 0.0;
  std::vector<double> fit_grid;
  std::vector<int> fit_ranks{1, 5, 25};
  bool fit_trace = false;
  fit_cmd->add_option("csv", fit_csv, "dataset with header x1,...,xd,y")->required();
  fit_cmd->add_option("--lambda", fit_lambda, "ridge weight")->check(CLI::NonNegativeNumber);
  auto* alpha_opt = fit_cmd->add_option("--alpha", fit_alpha, "fixed truncation scale");
  auto* grid_opt = fit_cmd->add_option("--alpha-grid", fit_grid,
                                       "explicit grid center,ratio,count")
                       ->delimiter(',')
                       ->expected(3);
  alpha_opt->excludes(grid_opt);
  fit_cmd->add_option("--eta-ranks", fit_ranks, "score ranks tried as eta")->delimiter(',');
  fit_cmd->add_flag("--trace", fit_trace, "print one line per iteration");

  // scenario
  auto* scen_cmd = app.add_subcommand("scenario", "Run one seeded replicated scenario");
  ScenarioConfig config;
  std::string scen_out;
  long long scen_n = 200;
  long long scen_d = 1;
  scen_cmd->add_option("--design", config.design, "design kind")
      ->transform(CLI::CheckedTransformer(kDesignNames))
      ->required();
  scen_cmd->add_option("--n", scen_n, "sample size")->required()->check(CLI::PositiveNumber);
  scen_cmd->add_option("--d", scen_d, "dimension")->required()->check(CLI::PositiveNumber);
  scen_cmd->add_option("--noise", config.noise.kind, "noise kind")
      ->transform(CLI::CheckedTransformer(kNoiseNames))
      ->required();
  scen_cmd->add_option("--q", config.noise.q, "heavy-tail exponent");
  scen_cmd->add_option("--p", config.noise.p, "mixture point-mass probability");
  scen_cmd->add_option("--rho", config.noise.rho, "mixture Gaussian variance share");
  scen_cmd->add_option("--sigma", config.noise_sigma, "noise scale")->required();
  scen_cmd->add_option("--reps", config.replications, "replication count")
      ->required()
      ->check(CLI::PositiveNumber);
  scen_cmd->add_option("--seed", config.base_seed, "base seed")->required();
  scen_cmd->add_option("--lambda", config.lambda, "ridge weight")->check(CLI::NonNegativeNumber);
  scen_cmd->add_option("--threads", config.threads, "worker threads (0 = hardware)");
  scen_cmd->add_option("--out", scen_out, "output CSV (appended)")->required();

  // coefficients
  auto* coef_cmd = app.add_subcommand("coefficients", "Print moment diagnostics for a CSV dataset");
  std::string coef_csv;
  double coef_lambda = 0.0;
  double coef_radius = 10.0;
  std::uint64_t coef_seed = 12345;
  double coef_c = 1.0;
  coef_cmd->add_option("csv", coef_csv, "dataset with header x1,...,xd,y")->required();
  coef_cmd->add_option("--lambda", coef_lambda, "ridge weight")->check(CLI::NonNegativeNumber);
  coef_cmd->add_option("--theta-radius", coef_radius, "coefficient ball radius")
      ->check(CLI::PositiveNumber);
  coef_cmd->add_option("--seed", coef_seed, "seed for the chi probe directions");
  coef_cmd->add_option("--c", coef_c, "constant in the scale formula")->check(CLI::PositiveNumber);

  // table
  auto* table_cmd = app.add_subcommand("table", "Run every row of a benchmark table");
  int table_id = 0;
  int table_reps = 0;
  std::uint64_t table_seed = 0;
  std::string table_out;
  int table_threads = 0;
  table_cmd->add_option("--suite", table_id, "table1..table5")
      ->transform(CLI::CheckedTransformer(kSuiteNames))
      ->required();
  table_cmd->add_option("--reps", table_reps, "replications per row")
      ->required()
      ->check(CLI::PositiveNumber);
  table_cmd->add_option("--seed", table_seed, "base seed")->required();
  table_cmd->add_option("--threads", table_threads, "worker threads (0 = hardware)");
  table_cmd->add_option("--out", table_out, "output CSV (appended)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit_cmd->parsed()) {
      return run_fit(fit_csv, fit_lambda, fit_alpha, alpha_opt->count() > 0,
                     fit_grid, fit_ranks, fit_trace);
    }
    if (scen_cmd->parsed()) {
      config.n = scen_n;
      config.d = scen_d;
      return run_scenario_cmd(config, scen_out);
    }
    if (coef_cmd->parsed()) {
      return run_coefficients(coef_csv, coef_lambda, coef_radius, coef_seed, coef_c);
    }
    if (table_cmd->parsed()) {
      return run_table(table_id, table_reps, table_seed, table_out, table_threads);
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
