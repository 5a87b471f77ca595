#include <benchmark/benchmark.h>

#include "fpp/eval.hpp"
#include "fpp/isotropy.hpp"
#include "fpp/linalg.hpp"
#include "fpp/postprocess.hpp"
#include "fpp/synth.hpp"

namespace {

fpp::SynthData spiked(std::size_t n, std::size_t dim, std::size_t classes = 1) {
  fpp::SynthSpec spec;
  spec.n_per_class = n / classes;
  spec.n_classes = classes;
  spec.dim = dim;
  spec.offset_norm = 5.0;
  spec.spike_variances = {50.0, 20.0};
  spec.class_sep = classes > 1 ? 6.0 : 0.0;
  spec.seed = 1;
  return fpp::generate(spec);
}

void BM_TopEigenpairs(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto f = spiked(4 * dim, dim).features;
  const auto s = fpp::scatter(fpp::subtract_row(f, fpp::column_mean(f)));
  for (auto _ : state) benchmark::DoNotOptimize(fpp::top_eigenpairs(s, k));
}
BENCHMARK(BM_TopEigenpairs)->Args({32, 2})->Args({128, 2})->Args({128, 10})->Args({512, 5});

void BM_SymmetricEigen(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto f = spiked(4 * dim, dim).features;
  const auto s = fpp::scatter(fpp::subtract_row(f, fpp::column_mean(f)));
  for (auto _ : state) benchmark::DoNotOptimize(fpp::symmetric_eigen(s));
}
BENCHMARK(BM_SymmetricEigen)->Arg(32)->Arg(128);

void BM_GramPath(benchmark::State& state) {
  const auto f = spiked(64, static_cast<std::size_t>(state.range(0))).features;
  const auto c = fpp::subtract_row(f, fpp::column_mean(f));
  for (auto _ : state) benchmark::DoNotOptimize(fpp::gram_eigenpairs(c, 2));
}
BENCHMARK(BM_GramPath)->Arg(1024)->Arg(4096);

void BM_FitTransform(benchmark::State& state) {
  const auto f = spiked(static_cast<std::size_t>(state.range(0)), 64).features;
  for (auto _ : state) benchmark::DoNotOptimize(fpp::fit_transform(f, 2));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitTransform)->Arg(1000)->Arg(10000);

void BM_IsotropyReport(benchmark::State& state) {
  const auto f = spiked(2000, static_cast<std::size_t>(state.range(0))).features;
  for (auto _ : state) benchmark::DoNotOptimize(fpp::isotropy_report(f));
}
BENCHMARK(BM_IsotropyReport)->Arg(32)->Arg(128);

void BM_Compare(benchmark::State& state) {
  const auto data = spiked(2000, 32, 4);
  fpp::EvalParams params;
  params.evaluator = static_cast<fpp::Evaluator>(state.range(0));
  params.k = 5;
  for (auto _ : state) benchmark::DoNotOptimize(fpp::compare(data.features, data.labels, 2, params, 0));
}
BENCHMARK(BM_Compare)->Arg(0)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
