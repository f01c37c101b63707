#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agentsim/dataset.hpp"
#include "agentsim/solver.hpp"

namespace agentsim {

struct BenchRow {
    int n_agents = 0;
    DecisionMode mode = DecisionMode::accelerated;
    int workers = 1;
    double seconds_per_frame = 0.0;  // median over the timed frames
    double speedup_vs_brute = 0.0;   // 0 when not applicable
    bool estimated = false;          // brute time fitted, not measured
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::string machine;

    std::string to_csv() const;
    std::string to_table() const;
};

// The obstacle-free synthetic benchmark scene: a 1000 x 1000 area, grid cell
// size 10 and z = 2, agents at random positions with velocities copied from
// the dataset.
Scenario make_scaling_scenario();
SimState make_scaling_state(const Scenario& scenario, const GroupedDataset& dataset, int n,
                            std::uint64_t seed);

struct ScalingOptions {
    std::vector<int> sizes;
    int frames = 10;               // timed frames per row, after warm-up
    std::vector<int> workers = {1};
    int brute_ceiling = 4000;      // brute rows above this n are fitted, not run
    std::uint64_t seed = 0;
};

// Brute vs accelerated seconds/frame for every size and worker count. With
// several worker counts the accelerated results are first verified to be
// bit-identical across them (hard failure otherwise).
BenchReport bench_scaling(const ScalingOptions& options, const GroupedDataset& dataset);

struct ParallelOptions {
    int n = 1000;
    std::vector<int> worker_counts = {1};
    int frames = 10;
    std::uint64_t seed = 0;
};

// Accelerated mode at fixed n across worker counts; verifies trajectory
// checksum identity across all counts before timing.
BenchReport bench_parallel(const ParallelOptions& options, const GroupedDataset& dataset);

}  // namespace agentsim
