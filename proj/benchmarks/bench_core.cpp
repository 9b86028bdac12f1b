#include <benchmark/benchmark.h>

#include <memory>

#include "thermoshift/balance.hpp"
#include "thermoshift/measure.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/pressure.hpp"
#include "thermoshift/subshift.hpp"

using namespace thermoshift;

namespace {

std::shared_ptr<const Subshift> golden_mean() {
  return std::make_shared<Subshift>(Subshift::from_matrix({{1, 1}, {1, 0}}));
}

std::shared_ptr<const Subshift> full2() {
  return std::make_shared<Subshift>(Subshift::from_forbidden(2, {}));
}

void BM_enumerate_words(benchmark::State& state) {
  const auto x = golden_mean();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(x->words(n));
  state.SetComplexityN(n);
}
BENCHMARK(BM_enumerate_words)->DenseRange(8, 24, 4);

void BM_partition_sums(benchmark::State& state) {
  const auto f = AdditivePotential::zero(golden_mean());
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(partition_sums(*f, n));
}
BENCHMARK(BM_partition_sums)->Arg(20)->Arg(40);

void BM_balanced_sweep(benchmark::State& state) {
  const auto x = golden_mean();
  const auto f = std::make_shared<MeasurePotential>(
      x, MarkovMeasure::parry(x, 12));
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        balanced_check(*f, Side::Right, BalanceMode::TwoSided, r, r));
}
BENCHMARK(BM_balanced_sweep)->DenseRange(4, 8, 2);

void BM_cocycle_eval(benchmark::State& state) {
  const CocyclePotential f(
      full2(), {{{2, 1}, {1, 1}}, {{1, 1}, {1, 2}}}, 1.0,
      MatrixNorm::Operator2);
  const int n = static_cast<int>(state.range(0));
  Word u(n);
  for (int i = 0; i < n; ++i) u[i] = i % 2;
  for (auto _ : state) benchmark::DoNotOptimize(f.eval(u));
}
BENCHMARK(BM_cocycle_eval)->Arg(8)->Arg(32)->Arg(128);

void BM_gibbs_build(benchmark::State& state) {
  const auto f = AdditivePotential::zero(golden_mean());
  for (auto _ : state)
    benchmark::DoNotOptimize(gibbs_build(*f, 16, 6, 3));
}
BENCHMARK(BM_gibbs_build);

}  // namespace

BENCHMARK_MAIN();
