// Microbenchmarks for the hot paths: path simulation, the estimator pass,
// and the Monte Carlo limit functionals.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "svx/acf.hpp"
#include "svx/cone_sets.hpp"
#include "svx/estimators.hpp"
#include "svx/limit_functionals.hpp"
#include "svx/sv_model.hpp"

namespace {

svx::SvConfig base_model(std::size_t n, svx::AcfModel acf) {
  svx::SvConfig cfg;
  cfg.acf = acf;
  cfg.vol = svx::VolatilityFn::Exp();
  cfg.tail = svx::TailModel::Pareto(2.0);
  cfg.n = n;
  cfg.h = 1;
  cfg.m = 2;
  cfg.h_prime = 0;
  return cfg;
}

void BM_SimulateAr1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  svx::SvSampler sampler(base_model(n, svx::AcfModel::Ar1(0.5)));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto path = sampler.sample(seed++);
    benchmark::DoNotOptimize(path.y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SimulateAr1)->Arg(10000)->Arg(100000);

void BM_SimulateFgn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  svx::SvSampler sampler(base_model(n, svx::AcfModel::Fgn(0.9)));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto path = sampler.sample(seed++);
    benchmark::DoNotOptimize(path.y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SimulateFgn)->Arg(10000)->Arg(100000);

void BM_PsiHatCurve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  svx::SvSampler sampler(base_model(n, svx::AcfModel::Ar1(0.5)));
  const auto path = sampler.sample(7);
  svx::EstimatorConfig cfg;
  cfg.set = svx::ExtremeSet::Box(1);
  cfg.m = 2;
  cfg.k = svx::k_power_rule(n, 0.6);
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(0.1 * i);
  for (auto _ : state) {
    auto curve = svx::psi_hat_curve(path.y, cfg, grid);
    benchmark::DoNotOptimize(curve.points.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_PsiHatCurve)->Arg(10000)->Arg(100000);

void BM_McPsiLimit(benchmark::State& state) {
  const auto cfg = base_model(1000, svx::AcfModel::Ar1(0.5));
  const std::vector<double> grid = {0.5, 1.0, 2.0, 5.0};
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto curve = svx::mc_psi_limit(cfg, svx::ExtremeSet::Box(1), grid,
                                   static_cast<std::uint64_t>(state.range(0)),
                                   seed++);
    benchmark::DoNotOptimize(curve.value.data());
  }
}
BENCHMARK(BM_McPsiLimit)->Arg(10000)->Arg(100000);

void BM_NuEval(benchmark::State& state) {
  const auto set = svx::ExtremeSet::Combined();
  const std::vector<double> u = {1.2, 0.8, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(svx::nu_eval(set, 2.0, u));
  }
}
BENCHMARK(BM_NuEval);

}  // namespace

BENCHMARK_MAIN();
