// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "rdr/estimator.hpp"
#include "rdr/parallel.hpp"
#include "rdr/zoo.hpp"

namespace {

using namespace rdr;

std::unique_ptr<PrefixModel> garch(std::int64_t d) { return make_model("garch", {{"d", d}}); }

template <bool Parallel>
void BM_ReplicateRdr(benchmark::State& state) {
  const auto model = garch(state.range(0));
  const std::size_t d = model->dimension();
  const RedrawDistribution q = log_optimal_q(CostProfile::linear(d));
  const std::size_t n = 4 * d / 10 + 1;
  const auto run = [&](PrefixModel& m, std::size_t r) {
    Stream rng = Stream::derive(1, 2, r);
    return rdr_estimate(m, q, n, rng).estimate;
  };
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(replicate_parallel(*model, 64, run));
    } else {
      benchmark::DoNotOptimize(replicate_serial(*model, 64, run));
    }
  }
  state.SetItemsProcessed(state.iterations() * 64);
}

template <bool Parallel>
void BM_SampleMoments(benchmark::State& state) {
  const auto model = garch(state.range(0));
  const Stream rng(7);
  for (auto _ : state) {
    if constexpr (Parallel) {
      benchmark::DoNotOptimize(sample_moments_parallel(*model, 10000, rng));
    } else {
      benchmark::DoNotOptimize(sample_moments_serial(*model, 10000, rng));
    }
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}

BENCHMARK(BM_ReplicateRdr<false>)->Name("replicate_rdr/serial")->Arg(250)->Arg(1250)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicateRdr<true>)->Name("replicate_rdr/omp")->Arg(250)->Arg(1250)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleMoments<false>)->Name("var_f/serial")->Arg(250)->Arg(1250)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleMoments<true>)->Name("var_f/omp")->Arg(250)->Arg(1250)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
