#include <benchmark/benchmark.h>

#include "ecd/circlemap.hpp"
#include "ecd/lyapunov.hpp"
#include "ecd/observation.hpp"
#include "ecd/quantum.hpp"

using namespace ecd;

static void BM_IterateLogistic(benchmark::State& state) {
  const auto sys = builtin_map("logistic", {3.9});
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iterate_map(sys, std::vector{0.3}, 0, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IterateLogistic)->Arg(10'000)->Arg(1'000'000);

static void BM_EmpiricalModel(benchmark::State& state) {
  const auto sys = builtin_map("henon");
  const auto orbit = iterate_map(sys, map_info("henon").default_x0, 1000, 100'000);
  const auto cells = static_cast<std::size_t>(state.range(0));
  const EquiPartition part(sys.domain(), {cells, cells});
  for (auto _ : state) benchmark::DoNotOptimize(empirical_model(orbit, part));
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_EmpiricalModel)->Arg(10)->Arg(100);

static void BM_EcdOfSystem(benchmark::State& state) {
  const auto sys = builtin_map("logistic", {3.71});
  const auto spec = ObservationSpec::partition({100});
  for (auto _ : state) benchmark::DoNotOptimize(ecd_of_system(sys, InitialEnsemble::single({0.3}), spec));
}
BENCHMARK(BM_EcdOfSystem)->Unit(benchmark::kMillisecond);

static void BM_LyapunovHenon(benchmark::State& state) {
  const auto sys = builtin_map("henon");
  LyapunovOptions options;
  options.reorthonormalize_every = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_md(sys, std::vector{0.1, 0.1}, 1000, 100'000, options));
}
BENCHMARK(BM_LyapunovHenon)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ConvergentDecay(benchmark::State& state) {
  circle::DecayOptions options;
  options.length = 100'000;
  options.workers = 1;
  const double v = 0.6180339887498949;
  for (auto _ : state) benchmark::DoNotOptimize(circle::convergent_decay(v, options));
}
BENCHMARK(BM_ConvergentDecay)->Unit(benchmark::kMillisecond);

static void BM_QuantumEcdDegenerate(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto rho = quantum::DensityMatrix::maximally_mixed(d);
  const auto channel = quantum::QuantumChannel::depolarizing(d, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(quantum::quantum_ecd(rho, channel, 16));
}
BENCHMARK(BM_QuantumEcdDegenerate)->Arg(2)->Arg(8);
BENCHMARK_MAIN();
