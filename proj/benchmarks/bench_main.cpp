#include "l5/allocator.hpp"
#include "l5/pathfinder.hpp"
#include "l5/simulator.hpp"
#include "l5/topology.hpp"

#include "oracles.hpp"

#include <benchmark/benchmark.h>

using namespace l5;

static void
BM_WaterFill(benchmark::State& state)
{
  std::mt19937_64 rng(1);
  std::vector<oracle::FillInstance> instances;
  for (int i = 0; i < 64; ++i)
    instances.push_back(oracle::random_fill_instance(rng, state.range(0), state.range(1), true));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& inst = instances[i++ % instances.size()];
    benchmark::DoNotOptimize(allocator::water_fill(inst.capacities, inst.demands));
  }
}
BENCHMARK(BM_WaterFill)->Args({8, 6})->Args({32, 24});

static void
BM_DisjointPaths(benchmark::State& state)
{
  std::mt19937_64 rng(2);
  auto n = static_cast<std::size_t>(state.range(0));
  auto g = oracle::random_graph(rng, n, 2, 2 * n, true);
  auto db = oracle::database_of(g);
  auto src = parse_address("h0");
  auto dst = parse_address("h1");
  for (auto _ : state)
    benchmark::DoNotOptimize(pathfinder::k_disjoint_paths(db, src, dst, 3));
}
BENCHMARK(BM_DisjointPaths)->Arg(8)->Arg(20)->Arg(60);

static void
BM_Converge(benchmark::State& state)
{
  std::mt19937_64 rng(3);
  auto n = static_cast<std::size_t>(state.range(0));
  auto net = oracle::flood_network(oracle::random_graph(rng, n, 0, 2 * n, true));
  for (auto _ : state)
    benchmark::DoNotOptimize(topology::converge(net));
}
BENCHMARK(BM_Converge)->Arg(20)->Arg(60);

static void
BM_RunFixture(benchmark::State& state, const char* name)
{
  auto c = scenario::load_file(std::string(L5_SCENARIO_DIR) + "/" + name + ".json");
  for (auto _ : state)
    benchmark::DoNotOptimize(simnet::run_scenario(c));
}
BENCHMARK_CAPTURE(BM_RunFixture, dual_path, "dual-path")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunFixture, transatlantic, "transatlantic-pubsub")->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
