// Command-line front end: dataset estimation, scenario simulation with CSV
// logs and SVG snapshots, and the scaling benchmark.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agentsim/bench.hpp"
#include "agentsim/dataset.hpp"
#include "agentsim/error.hpp"
#include "agentsim/log.hpp"
#include "agentsim/render.hpp"
#include "agentsim/scenario.hpp"
#include "agentsim/solver.hpp"

namespace {

using namespace agentsim;

struct TimeBase {
    std::optional<double> dt;
    std::optional<double> frame_rate;

    double resolve() const {
        if (dt && frame_rate)
            throw ValidationError("pass exactly one of --dt and --frame-rate, not both");
        if (dt) {
            if (!(*dt > 0.0)) throw ValidationError("--dt must be > 0");
            return *dt;
        }
        if (frame_rate) {
            if (!(*frame_rate > 0.0)) throw ValidationError("--frame-rate must be > 0");
            return 1.0 / *frame_rate;
        }
        throw ValidationError("one of --dt or --frame-rate is required");
    }
};

void add_time_base(CLI::App* cmd, TimeBase& tb) {
    cmd->add_option("--dt", tb.dt, "dataset sampling interval in seconds");
    cmd->add_option("--frame-rate", tb.frame_rate, "dataset frame rate in Hz (dt = 1/rate)");
}

std::vector<EstimatedState> estimate_files(const std::vector<std::string>& paths, double dt,
                                           int delta) {
    std::vector<EstimatedState> states;
    for (const std::string& path : paths) {
        const auto trajectories = load_trajectories_file(path);
        for (const RawTrajectory& traj : trajectories) {
            const auto estimated = estimate_states(traj, dt, delta, DirectionMode::displacement());
            states.insert(states.end(), estimated.begin(), estimated.end());
        }
    }
    return states;
}

int cmd_estimate(const std::vector<std::string>& inputs, const TimeBase& tb, int delta,
                 double bin_width, const std::string& out_path) {
    const double dt = tb.resolve();
    const auto states = estimate_files(inputs, dt, delta);
    if (states.empty()) throw ValidationError("no states could be estimated from the input");
    const GroupedDataset dataset = group_by_speed(states, bin_width);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + out_path + "'");
    out << "kind,px,py,vx,vy,cdx,cdy,group\n";
    for (const EstimatedState& st : dataset.states()) {
        out << to_string(st.kind) << ',' << format_double_roundtrip(st.position.x) << ','
            << format_double_roundtrip(st.position.y) << ','
            << format_double_roundtrip(st.velocity.x) << ','
            << format_double_roundtrip(st.velocity.y) << ','
            << format_double_roundtrip(st.control_direction.x) << ','
            << format_double_roundtrip(st.control_direction.y) << ','
            << dataset.group_of_speed(norm(st.velocity)) << '\n';
    }

    std::cout << "states: " << dataset.states().size() << "\n";
    for (int k = 0; k < kKindCount; ++k) {
        const AgentKind kind = static_cast<AgentKind>(k);
        if (!dataset.has_kind(kind)) continue;
        std::cout << "kind " << to_string(kind) << " (" << dataset.kind_count(kind) << "):";
        for (const auto& [group, size] : dataset.group_sizes(kind))
            std::cout << " group " << group << "=" << size;
        std::cout << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& scenario_path, const std::vector<std::string>& dataset_paths,
                 int frames, const TimeBase& tb, std::uint64_t seed, int workers,
                 const std::string& out_path, const std::string& svg_dir, int snapshot_every) {
    Scenario scn = load_scenario_file(scenario_path);
    scn.params.seed = seed;

    const double dt = tb.resolve();
    const auto states = estimate_files(dataset_paths, dt, 10);
    if (states.empty()) throw ValidationError("no states could be estimated from the datasets");
    const GroupedDataset dataset = group_by_speed(states, scn.params.bin_width);

    // Snapshots require replaying the logged frames, so keep every frame.
    const TrajectoryLog log = run(scn, dataset, frames, {workers, DecisionMode::accelerated});
    log.write_csv_file(out_path);

    if (!svg_dir.empty()) {
        std::filesystem::create_directories(svg_dir);
        const std::size_t n = log.rows.size() / static_cast<std::size_t>(log.frame_count);
        std::vector<AgentState> agents = initialize_agents(scn, dataset, scn.params.seed);
        for (int f = 0; f <= frames; ++f) {
            if (!(f % snapshot_every == 0 || f == frames)) continue;
            const std::size_t base = static_cast<std::size_t>(f) * n;
            for (std::size_t i = 0; i < n; ++i) {
                agents[i].position = log.rows[base + i].position;
                agents[i].velocity = log.rows[base + i].velocity;
                if (norm(agents[i].velocity) >= kEps)
                    agents[i].heading = unit_vector(agents[i].velocity);
            }
            char name[32];
            std::snprintf(name, sizeof(name), "frame_%06d.svg", f);
            std::ofstream svg(std::filesystem::path(svg_dir) / name, std::ios::binary);
            if (!svg) throw ValidationError(std::string("cannot write snapshot '") + name + "'");
            svg << render_svg(scn, agents, f * scn.params.dt);
        }
    }
    return 0;
}

int cmd_bench(const std::vector<int>& sizes, const std::vector<int>& workers, int frames,
              int brute_ceiling) {
    // Deterministic synthetic dataset; speeds span a realistic walking range
    // wide enough that z = 2 is a real restriction.
    SynthSpec synth;
    synth.kinds = {AgentKind::pedestrian};
    synth.speed_min = 0.0;
    synth.speed_max = 5.0;
    synth.count_per_kind = 240;
    synth.seed = 42;
    const GroupedDataset dataset = group_by_speed(synthesize_dataset(synth), 0.5);

    ScalingOptions options;
    options.sizes = sizes;
    options.workers = workers;
    options.frames = frames;
    options.brute_ceiling = brute_ceiling;
    const BenchReport report = bench_scaling(options, dataset);
    std::cout << report.to_table() << "\n" << report.to_csv();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"data-driven heterogeneous multi-agent simulator"};
    app.require_subcommand(1);

    // estimate
    auto* estimate = app.add_subcommand("estimate", "estimate dataset states from trajectories");
    std::vector<std::string> est_inputs;
    TimeBase est_tb;
    int est_delta = 10;
    double est_bin_width = 0.5;
    std::string est_out;
    estimate->add_option("--in", est_inputs, "trajectory CSV input")->required();
    add_time_base(estimate, est_tb);
    estimate->add_option("--delta", est_delta, "control-direction window in frames");
    estimate->add_option("--bin-width", est_bin_width, "speed group width in m/s");
    estimate->add_option("--out", est_out, "estimated-states CSV output")->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a scenario and write the trajectory log");
    std::string sim_scenario;
    std::vector<std::string> sim_datasets;
    int sim_frames = 0;
    TimeBase sim_tb;
    std::uint64_t sim_seed = 0;
    int sim_workers = 1;
    std::string sim_out;
    std::string sim_svg_dir;
    int sim_snapshot_every = 100;
    simulate->add_option("--scenario", sim_scenario, "scenario file")->required();
    simulate->add_option("--dataset", sim_datasets, "trajectory CSV dataset (repeatable)")
        ->required();
    simulate->add_option("--frames", sim_frames, "frames to simulate")->required();
    add_time_base(simulate, sim_tb);
    simulate->add_option("--seed", sim_seed, "simulation seed");
    simulate->add_option("--workers", sim_workers, "decision-phase worker threads");
    simulate->add_option("--out", sim_out, "trajectory log CSV path")->required();
    simulate->add_option("--svg-dir", sim_svg_dir, "directory for SVG snapshots");
    simulate->add_option("--snapshot-every", sim_snapshot_every, "frames between snapshots");

    // bench
    auto* bench = app.add_subcommand("bench", "brute vs accelerated scaling benchmark");
    std::vector<int> bench_sizes;
    std::vector<int> bench_workers = {1};
    int bench_frames = 10;
    int bench_ceiling = 4000;
    bench->add_option("--sizes", bench_sizes, "agent counts")->required()->delimiter(',');
    bench->add_option("--workers", bench_workers, "worker counts")->delimiter(',');
    bench->add_option("--frames", bench_frames, "timed frames per measurement");
    bench->add_option("--brute-ceiling", bench_ceiling, "largest n to run brute force at");

    CLI11_PARSE(app, argc, argv);

    try {
        if (estimate->parsed())
            return cmd_estimate(est_inputs, est_tb, est_delta, est_bin_width, est_out);
        if (simulate->parsed()) {
            if (sim_frames < 1) throw ValidationError("--frames must be >= 1");
            if (sim_workers < 1) throw ValidationError("--workers must be >= 1");
            if (sim_snapshot_every < 1) throw ValidationError("--snapshot-every must be >= 1");
            return cmd_simulate(sim_scenario, sim_datasets, sim_frames, sim_tb, sim_seed,
                                sim_workers, sim_out, sim_svg_dir, sim_snapshot_every);
        }
        if (bench->parsed()) return cmd_bench(bench_sizes, bench_workers, bench_frames, bench_ceiling);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
