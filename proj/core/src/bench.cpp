#include "agentsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "agentsim/error.hpp"

namespace agentsim {

namespace {

std::string mode_name(DecisionMode mode) {
    return mode == DecisionMode::brute_force ? "brute" : "accelerated";
}

double median_of(std::vector<double> values) {
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    return values[mid];
}

double time_seconds_per_frame(SimState sim, const Scenario& scn, const GroupedDataset& ds,
                              const StepOptions& options, int frames) {
    using clock = std::chrono::steady_clock;
    for (int i = 0; i < 2; ++i) step(sim, scn, ds, options);  // warm-up
    std::vector<double> secs;
    secs.reserve(frames);
    for (int f = 0; f < frames; ++f) {
        const auto t0 = clock::now();
        step(sim, scn, ds, options);
        const auto t1 = clock::now();
        secs.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    return median_of(std::move(secs));
}

std::string machine_info() {
    return std::to_string(std::thread::hardware_concurrency()) + " hardware threads, " __VERSION__;
}

// Checksum identity of short accelerated runs across worker counts.
void verify_worker_identity(const Scenario& scn, const GroupedDataset& ds, const SimState& initial,
                            const std::vector<int>& workers) {
    std::uint64_t reference = 0;
    bool have_reference = false;
    for (const int w : workers) {
        SimState sim = initial;
        TrajectoryLog log;
        for (int f = 0; f < 5; ++f) {
            step(sim, scn, ds, {w, DecisionMode::accelerated});
            log.append_frame(sim.frame, sim.agents);
        }
        const std::uint64_t checksum = log.checksum();
        if (!have_reference) {
            reference = checksum;
            have_reference = true;
        } else if (checksum != reference) {
            throw SolverError("benchmark: results diverge across worker counts (" +
                              std::to_string(workers.front()) + " vs " + std::to_string(w) + ")");
        }
    }
}

}  // namespace

std::string BenchReport::to_csv() const {
    std::string out = "n,mode,workers,seconds_per_frame,speedup_vs_brute,estimated\n";
    for (const BenchRow& r : rows) {
        out += std::to_string(r.n_agents) + "," + mode_name(r.mode) + "," +
               std::to_string(r.workers) + "," + format_double_roundtrip(r.seconds_per_frame) +
               "," + format_double_roundtrip(r.speedup_vs_brute) + "," +
               (r.estimated ? "1" : "0") + "\n";
    }
    return out;
}

std::string BenchReport::to_table() const {
    char buf[160];
    std::string out = "      n         mode  workers      s/frame      speedup\n";
    for (const BenchRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%7d %12s %8d %12.6f %12.1f%s\n", r.n_agents,
                      mode_name(r.mode).c_str(), r.workers, r.seconds_per_frame,
                      r.speedup_vs_brute, r.estimated ? "  (fitted)" : "");
        out += buf;
    }
    out += "machine: " + machine + "\n";
    return out;
}

Scenario make_scaling_scenario() {
    Scenario scn;
    scn.params.bounds_min = {0.0, 0.0};
    scn.params.bounds_max = {1000.0, 1000.0};
    scn.params.dt = 0.1;
    scn.params.anticipation_steps = 10;
    scn.params.d_c = 2.0;
    scn.params.d_a = 2.0;
    scn.params.d_a_max = 6.0;
    scn.params.cell_size = 10.0;
    scn.params.z = 2;
    scn.params.bin_width = 0.5;

    EnergyWeights w;
    w.continuity_direction = 1.0;
    w.continuity_speed = 1.0;
    w.collision_instant = 1.0;
    w.collision_anticipated = 1.0;
    w.direction = 1.0;
    w.speed_goal = 0.5;
    scn.weights[static_cast<std::size_t>(AgentKind::pedestrian)] = w;

    AgentSpec spec;
    spec.name = "benchmark";
    spec.kind = AgentKind::pedestrian;
    spec.count = 1;
    spec.shape = Circle{0.25};
    spec.placement.mode = Placement::Mode::region;
    spec.placement.rect_min = scn.params.bounds_min;
    spec.placement.rect_max = scn.params.bounds_max;
    spec.goal.mode = Goal::Mode::opposite_side;
    scn.agent_specs.push_back(spec);
    return scn;
}

SimState make_scaling_state(const Scenario& scn, const GroupedDataset& ds, int n,
                            std::uint64_t seed) {
    if (n < 1) throw ValidationError("benchmark: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const auto pool = ds.kind_indices(AgentKind::pedestrian);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);

    SimState sim;
    sim.agents.reserve(n);
    const Vec2 lo = scn.params.bounds_min;
    const Vec2 span = scn.params.bounds_max - scn.params.bounds_min;
    for (int i = 0; i < n; ++i) {
        AgentState a;
        a.id = static_cast<std::uint32_t>(i);
        a.kind = AgentKind::pedestrian;
        a.shape = Circle{0.25};
        a.position = {lo.x + span.x * u01(rng), lo.y + span.y * u01(rng)};
        a.velocity = ds.states()[pool[pick(rng)]].velocity;  // copied, not adapted
        a.control_direction = unit_vector(a.velocity);
        a.heading = norm(a.velocity) >= kEps ? unit_vector(a.velocity) : Vec2{1.0, 0.0};
        a.goal.mode = Goal::Mode::opposite_side;
        a.goal.fixed_direction = a.control_direction;
        a.speed_group = ds.group_of_speed(norm(a.velocity));
        a.target_speed = norm(a.velocity);
        sim.agents.push_back(a);
    }
    sim.grid = SpatialGrid(scn.params.cell_size, {0.0, 0.0});
    for (const AgentState& a : sim.agents) sim.grid.insert(a.id, a.position);
    return sim;
}

BenchReport bench_scaling(const ScalingOptions& options, const GroupedDataset& dataset) {
    if (options.sizes.empty()) throw ValidationError("benchmark: sizes must be nonempty");
    if (options.frames < 10) throw ValidationError("benchmark: frames must be >= 10");
    if (options.workers.empty()) throw ValidationError("benchmark: workers must be nonempty");

    const Scenario scn = make_scaling_scenario();
    BenchReport report;
    report.machine = machine_info();

    for (const int n : options.sizes) {
        const SimState initial = make_scaling_state(scn, dataset, n, options.seed);
        if (options.workers.size() > 1)
            verify_worker_identity(scn, dataset, initial, options.workers);

        // Brute rows above the ceiling are extrapolated with t = c * n^2
        // fitted on the measured sizes.
        std::vector<double> fit_coeffs;
        for (const int w : options.workers) {
            BenchRow brute;
            brute.n_agents = n;
            brute.mode = DecisionMode::brute_force;
            brute.workers = w;
            if (n <= options.brute_ceiling) {
                brute.seconds_per_frame = time_seconds_per_frame(
                    initial, scn, dataset, {w, DecisionMode::brute_force}, options.frames);
                fit_coeffs.push_back(brute.seconds_per_frame /
                                     (static_cast<double>(n) * static_cast<double>(n)));
            } else {
                double c = 0.0;
                int measured = 0;
                for (const BenchRow& r : report.rows) {
                    if (r.mode != DecisionMode::brute_force || r.estimated || r.workers != w)
                        continue;
                    c += r.seconds_per_frame /
                         (static_cast<double>(r.n_agents) * static_cast<double>(r.n_agents));
                    ++measured;
                }
                if (measured == 0) continue;  // nothing to fit from; omit the row
                brute.seconds_per_frame =
                    (c / measured) * static_cast<double>(n) * static_cast<double>(n);
                brute.estimated = true;
            }
            report.rows.push_back(brute);

            BenchRow accel;
            accel.n_agents = n;
            accel.mode = DecisionMode::accelerated;
            accel.workers = w;
            accel.seconds_per_frame = time_seconds_per_frame(
                initial, scn, dataset, {w, DecisionMode::accelerated}, options.frames);
            accel.speedup_vs_brute = brute.seconds_per_frame / accel.seconds_per_frame;
            accel.estimated = brute.estimated;
            report.rows.push_back(accel);
        }
    }
    return report;
}

BenchReport bench_parallel(const ParallelOptions& options, const GroupedDataset& dataset) {
    if (options.worker_counts.empty())
        throw ValidationError("benchmark: worker counts must be nonempty");
    if (options.n < *std::max_element(options.worker_counts.begin(), options.worker_counts.end()))
        throw ValidationError("benchmark: n must be >= the largest worker count");

    const Scenario scn = make_scaling_scenario();
    const SimState initial = make_scaling_state(scn, dataset, options.n, options.seed);
    verify_worker_identity(scn, dataset, initial, options.worker_counts);

    BenchReport report;
    report.machine = machine_info();
    for (const int w : options.worker_counts) {
        BenchRow row;
        row.n_agents = options.n;
        row.mode = DecisionMode::accelerated;
        row.workers = w;
        row.seconds_per_frame = time_seconds_per_frame(
            initial, scn, dataset, {w, DecisionMode::accelerated}, options.frames);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace agentsim
