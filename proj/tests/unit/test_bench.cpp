#include <doctest.h>

#include "agentsim/bench.hpp"
#include "agentsim/error.hpp"

using namespace agentsim;

namespace {

GroupedDataset bench_dataset() {
    SynthSpec spec;
    spec.kinds = {AgentKind::pedestrian};
    spec.speed_min = 0.0;
    spec.speed_max = 5.0;
    spec.count_per_kind = 60;
    spec.seed = 42;
    return group_by_speed(synthesize_dataset(spec), 0.5);
}

}  // namespace

TEST_CASE("bench_scaling report shape") {
    const GroupedDataset ds = bench_dataset();
    ScalingOptions options;
    options.sizes = {40};
    options.frames = 10;
    options.workers = {1};
    const BenchReport report = bench_scaling(options, ds);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].mode == DecisionMode::brute_force);
    CHECK(report.rows[1].mode == DecisionMode::accelerated);
    CHECK(report.rows[0].seconds_per_frame > 0.0);
    CHECK(report.rows[1].seconds_per_frame > 0.0);
    CHECK(report.rows[1].speedup_vs_brute ==
          doctest::Approx(report.rows[0].seconds_per_frame / report.rows[1].seconds_per_frame));
    CHECK(!report.machine.empty());

    const std::string csv = report.to_csv();
    CHECK(csv.find("n,mode,workers,seconds_per_frame,speedup_vs_brute,estimated") == 0);
    CHECK(report.to_table().find("accelerated") != std::string::npos);
}

TEST_CASE("bench_scaling above the brute ceiling marks rows as fitted") {
    const GroupedDataset ds = bench_dataset();
    ScalingOptions options;
    options.sizes = {30, 60};
    options.frames = 10;
    options.workers = {1};
    options.brute_ceiling = 40;  // 60 exceeds it
    const BenchReport report = bench_scaling(options, ds);
    REQUIRE(report.rows.size() == 4);
    CHECK(!report.rows[0].estimated);
    CHECK(report.rows[2].estimated);  // brute row at n=60
    CHECK(report.rows[2].seconds_per_frame > 0.0);
}

TEST_CASE("bench_parallel verifies identity across worker counts") {
    const GroupedDataset ds = bench_dataset();
    ParallelOptions options;
    options.n = 64;
    options.worker_counts = {1, 4};
    options.frames = 10;
    const BenchReport report = bench_parallel(options, ds);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].workers == 1);
    CHECK(report.rows[1].workers == 4);
}

TEST_CASE("bench input validation") {
    const GroupedDataset ds = bench_dataset();
    CHECK_THROWS_AS(bench_scaling({{}, 10, {1}, 4000, 0}, ds), ValidationError);
    CHECK_THROWS_AS(bench_scaling({{10}, 5, {1}, 4000, 0}, ds), ValidationError);  // frames < 10
    ParallelOptions bad;
    bad.n = 2;
    bad.worker_counts = {8};
    CHECK_THROWS_AS(bench_parallel(bad, ds), ValidationError);
}
