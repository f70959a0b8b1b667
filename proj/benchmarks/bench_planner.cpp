#include <benchmark/benchmark.h>

#include "multiplan/run.hpp"
#include "multiplan/world.hpp"

namespace mp = multiplan;

namespace {

void run_scenario(benchmark::State& state, const char* file, mp::SolverKind kind) {
  const mp::Scenario s = mp::load_scenario(std::filesystem::path(MULTIPLAN_DATA_DIR) / "scenarios" / file);
  const mp::World world = mp::build_world(s, 1);
  const auto requests = mp::scenario_requests(world);
  mp::RunOptions o;
  o.solver = kind;
  for (auto _ : state) benchmark::DoNotOptimize(mp::run_planner(world, requests, o));
  state.counters["requests"] = static_cast<double>(requests.size());
}

void BM_FullDay(benchmark::State& state) { run_scenario(state, "default.yaml", mp::SolverKind::alns); }
BENCHMARK(BM_FullDay)->Unit(benchmark::kMillisecond);

void BM_FiftyRequestsAlns(benchmark::State& state) {
  run_scenario(state, "greedy_compare.yaml", mp::SolverKind::alns);
}
BENCHMARK(BM_FiftyRequestsAlns)->Unit(benchmark::kMillisecond);

void BM_FiftyRequestsGreedy(benchmark::State& state) {
  run_scenario(state, "greedy_compare.yaml", mp::SolverKind::greedy);
}
BENCHMARK(BM_FiftyRequestsGreedy)->Unit(benchmark::kMillisecond);

void BM_BuildWorld(benchmark::State& state) {
  const mp::Scenario s = mp::default_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(mp::build_world(s, 1));
}
BENCHMARK(BM_BuildWorld)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
