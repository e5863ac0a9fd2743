#include <benchmark/benchmark.h>

#include "stablegen/derivative_table.hpp"
#include "stablegen/mechanism.hpp"
#include "stablegen/random.hpp"
#include "stablegen/rates.hpp"
#include "stablegen/simulate.hpp"

namespace {

using namespace stablegen;

void BM_DerivativeTableEval(benchmark::State& state) {
  const auto mech = StableMechanism::sub_critical(1.0, 1.0, 1.5);
  const auto table = DerivativeTable::for_ubar(mech, static_cast<int>(state.range(0)));
  const double log_c = log_extinction_c(mech, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.log_abs_eval(log_c));
  }
}
BENCHMARK(BM_DerivativeTableEval)->Arg(4)->Arg(16)->Arg(64);

void BM_DeathRate(benchmark::State& state) {
  const auto mech = StableMechanism::sub_critical(1.0, 1.0, 1.5);
  const RateQuery query{state.range(0), state.range(0) / 2, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(death_rate(mech, query));
  }
}
BENCHMARK(BM_DeathRate)->Arg(4)->Arg(16);

void BM_GwiPath(benchmark::State& state) {
  const auto mech = StableMechanism::sub_critical(1.0, 1.0, 1.5);
  SimulateOptions opts;
  opts.state_cap = 10000;
  Simulator sim(mech, opts);
  std::uint64_t replica = 0;
  for (auto _ : state) {
    Rng rng(17, replica++);
    benchmark::DoNotOptimize(sim.gwi(2.0, rng).final_state());
  }
}
BENCHMARK(BM_GwiPath);

void BM_SampleW(benchmark::State& state) {
  const auto mech = StableMechanism::sub_critical(1.0, 1.0, 1.5);
  Rng rng(17, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_W(mech, rng));
  }
}
BENCHMARK(BM_SampleW);

void BM_PositiveStable(benchmark::State& state) {
  Rng rng(17, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_positive_stable(0.5, rng));
  }
}
BENCHMARK(BM_PositiveStable);

}  // namespace

BENCHMARK_MAIN();
