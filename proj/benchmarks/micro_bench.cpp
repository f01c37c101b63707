#include <benchmark/benchmark.h>

#include "agentsim/bench.hpp"
#include "agentsim/dataset.hpp"
#include "agentsim/solver.hpp"

namespace {

using namespace agentsim;

GroupedDataset make_dataset(int count) {
    SynthSpec spec;
    spec.kinds = {AgentKind::pedestrian};
    spec.speed_min = 0.0;
    spec.speed_max = 5.0;
    spec.count_per_kind = count;
    spec.seed = 7;
    return group_by_speed(synthesize_dataset(spec), 0.5);
}

void BM_PredictedDistance(benchmark::State& state) {
    const Body a{{0.0, 0.0}, {1.2, 0.3}, {1.0, 0.0}, Circle{0.25}};
    const Body b{{3.0, 1.0}, {-0.8, 0.1}, {1.0, 0.0}, Rect{2.0, 0.9}};
    double acc = 0.0;
    for (auto _ : state) acc += predicted_distance(a, {1.0, 0.5}, b, 1.0);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_PredictedDistance);

void BM_GridBuild(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GroupedDataset ds = make_dataset(240);
    const Scenario scn = make_scaling_scenario();
    const SimState sim = make_scaling_state(scn, ds, n, 1);
    for (auto _ : state) {
        SpatialGrid grid(scn.params.cell_size, {0.0, 0.0});
        for (const AgentState& a : sim.agents) grid.insert(a.id, a.position);
        benchmark::DoNotOptimize(grid.cell_count());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GridBuild)->Arg(1000)->Arg(5000);

void BM_DecideAgent(benchmark::State& state) {
    const GroupedDataset ds = make_dataset(240);
    const Scenario scn = make_scaling_scenario();
    const SimState sim = make_scaling_state(scn, ds, 1000, 1);
    const SpatialGrid obstacles = build_obstacle_grid(scn);
    DecisionScratch scratch;
    std::uint32_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            decide_agent(sim, scn, ds, obstacles, i, DecisionMode::accelerated, scratch));
        i = (i + 1) % sim.agents.size();
    }
}
BENCHMARK(BM_DecideAgent);

void BM_Step(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const GroupedDataset ds = make_dataset(240);
    const Scenario scn = make_scaling_scenario();
    SimState sim = make_scaling_state(scn, ds, n, 1);
    for (auto _ : state) step(sim, scn, ds, {1, DecisionMode::accelerated});
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Step)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
