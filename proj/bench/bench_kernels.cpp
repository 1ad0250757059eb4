// Serial reference vs OpenMP kernel for the three parallel workloads.
#include <benchmark/benchmark.h>

#include <numeric>

#include "wsnsim/parallel.hpp"

using namespace wsnsim;

namespace {

ScenarioConfig sweep_config() {
  ScenarioConfig c;
  c.nodes = 20;
  c.run = SimTime::seconds(20);
  c.mobile_fraction = 0.3;
  c.flows.emplace_back().origin = 0;
  c.flows.back().destination = 19;
  c.flows.emplace_back().origin = 5;
  c.flows.back().destination = 12;
  return c;
}

std::vector<std::uint64_t> seeds(std::size_t n) {
  std::vector<std::uint64_t> s(n);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

template <auto Fn>
void bm_sweep(benchmark::State& state) {
  const auto cfg = sweep_config();
  const auto s = seeds(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(cfg, s, RunOptions{true, false}));
  state.counters["threads"] = parallel_threads();
}

template <auto Fn>
void bm_meeting(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(Fn(state.range(0)));
}

template <auto Fn>
void bm_hello(benchmark::State& state) {
  const auto slots = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(10, 0.1, slots, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(slots));
}

}  // namespace

BENCHMARK(bm_sweep<sweep_serial>)->Name("sweep/serial")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sweep<sweep_parallel>)->Name("sweep/parallel")->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_meeting<meeting_bound_serial>)->Name("meeting_bound/serial")->Arg(13)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_meeting<meeting_bound_parallel>)->Name("meeting_bound/parallel")->Arg(13)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_hello<hello_discoveries_serial>)->Name("hello/serial")->Arg(200'000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_hello<hello_discoveries_parallel>)->Name("hello/parallel")->Arg(200'000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
