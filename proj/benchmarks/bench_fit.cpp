#include <benchmark/benchmark.h>

#include "truncls/estimators.hpp"
#include "truncls/synthetic.hpp"

using namespace truncls;

namespace {

Dataset make_dataset(DesignKind kind, Eigen::Index n, Eigen::Index d,
                     NoiseKind noise_kind, std::uint64_t seed) {
  NoiseSpec noise;
  noise.kind = noise_kind;
  Rng rng = Rng::child(seed, 0);
  const DesignOracle oracle = build_oracle(kind, n, d, noise, rng, 10.0);
  return generate_dataset(oracle, rng);
}

}  // namespace

static void BM_LeastSquaresFit(benchmark::State& state) {
  const Dataset data =
      make_dataset(DesignKind::kInc, state.range(0), 10, NoiseKind::kGaussian, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(least_squares_fit(data));
  }
}
BENCHMARK(BM_LeastSquaresFit)->Arg(500)->Arg(2000);

static void BM_MinmaxFitGaussian(benchmark::State& state) {
  const Dataset data =
      make_dataset(DesignKind::kInc, state.range(0), 10, NoiseKind::kGaussian, 2);
  const Eigen::VectorXd ols = least_squares_fit(data);
  const double sigma2 = (data.xs * ols - data.ys).squaredNorm() / data.n();
  const TruncationParams params{0.45 / sigma2, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(minmax_truncated_fit(data, params));
  }
}
BENCHMARK(BM_MinmaxFitGaussian)->Arg(500)->Arg(2000);

static void BM_MinmaxFitMixture(benchmark::State& state) {
  const Dataset data = make_dataset(DesignKind::kInc, state.range(0), 10,
                                    NoiseKind::kDiracGaussianMixture, 3);
  const Eigen::VectorXd ols = least_squares_fit(data);
  const double sigma2 = (data.xs * ols - data.ys).squaredNorm() / data.n();
  const TruncationParams params{0.45 / sigma2, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(minmax_truncated_fit(data, params));
  }
}
BENCHMARK(BM_MinmaxFitMixture)->Arg(500)->Arg(2000);

static void BM_SelectAlphaAndFit(benchmark::State& state) {
  const Dataset data = make_dataset(DesignKind::kInc, state.range(0), 10,
                                    NoiseKind::kDiracGaussianMixture, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_alpha_and_fit(data));
  }
}
BENCHMARK(BM_SelectAlphaAndFit)->Arg(500)->Arg(2000);

BENCHMARK_MAIN();
