#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agentsim/agent.hpp"
#include "agentsim/dataset.hpp"
#include "agentsim/energy.hpp"
#include "agentsim/log.hpp"
#include "agentsim/scenario.hpp"
#include "agentsim/spatial.hpp"

namespace agentsim {

struct SimState {
    int frame = 0;
    double time = 0.0;
    std::vector<AgentState> agents;
    SpatialGrid grid;  // agent centers, rebuilt every frame
};

// Maps a dataset velocity into the agent's frame by carrying over the
// dataset's velocity-to-control offset: v = |v*| * (cd + (unit(v*) - cd*)).
// A candidate whose control direction was never estimable is rotated so its
// velocity aligns with the agent's control direction instead.
Vec2 adapt_velocity(const EstimatedState& candidate, Vec2 control);

// accelerated: neighbor candidates from the 3x3 grid block, velocity
// candidates from the +-z speed groups. brute_force: all agents, full kind
// dataset. With z covering every group and the grid equivalence condition
// satisfied, both modes produce bit-identical decisions.
enum class DecisionMode : std::uint8_t { accelerated, brute_force };

struct Decision {
    Vec2 velocity;
    Vec2 control_direction;
    double energy = 0.0;
    std::size_t candidate_index = 0;  // into the candidate list that was used
    CrossingState crossing;
    bool swap_crossing_roads = false;
};

// Reusable buffers for one decision worker.
struct DecisionScratch {
    std::vector<std::uint32_t> ids;
    std::vector<std::uint32_t> obstacle_ids;
    std::vector<Body> collision_pool;
    std::vector<Body> attraction_pool;
};

struct VelocityChoice {
    Vec2 velocity;
    double energy = 0.0;
    std::size_t candidate_index = 0;
};

// Minimum-energy adapted candidate; ties go to the lowest candidate index.
VelocityChoice choose_velocity(const DecisionContext& ctx, const EnergyWeights& weights,
                               std::span<const std::uint32_t> candidates,
                               const GroupedDataset& dataset);

// Full per-agent decision against the frame-n snapshot in `sim`. The
// obstacle index must cover the scenario's obstacles (see
// build_obstacle_grid); pass the same one to every call of a frame.
Decision decide_agent(const SimState& sim, const Scenario& scenario, const GroupedDataset& dataset,
                      const SpatialGrid& obstacle_grid, std::uint32_t index, DecisionMode mode,
                      DecisionScratch& scratch);

// Testing oracle: identical contract to the accelerated decision but
// enumerating the full kind dataset and all agents without the grid.
Decision brute_force_choose_velocity(const SimState& sim, const Scenario& scenario,
                                     const GroupedDataset& dataset, std::uint32_t index);

SpatialGrid build_obstacle_grid(const Scenario& scenario);

SimState make_sim_state(const Scenario& scenario, const GroupedDataset& dataset,
                        std::uint64_t seed);

struct StepOptions {
    int workers = 1;
    DecisionMode mode = DecisionMode::accelerated;
};

// Advances one frame: all agents decide in parallel over the frame-n
// snapshot, then every position moves by v_{n+1} * dt and the grid is
// rebuilt. Results are independent of worker count.
void step(SimState& sim, const Scenario& scenario, const GroupedDataset& dataset,
          const StepOptions& options = {});

struct RunOptions {
    int workers = 1;
    DecisionMode mode = DecisionMode::accelerated;
    int log_every = 1;       // 1 = every frame
    bool warn_grid = true;   // print the grid coverage warning to stderr
};

// initialize_agents + `frames` steps, logging every agent each frame.
// Deterministic for a fixed scenario seed at any worker count.
TrajectoryLog run(const Scenario& scenario, const GroupedDataset& dataset, int frames,
                  const RunOptions& options = {});

// Nonempty when the cell size is too small for the 3x3 block query to be
// provably equivalent to the all-pairs scan for this scenario + dataset.
std::optional<std::string> grid_condition_warning(const Scenario& scenario,
                                                  const GroupedDataset& dataset);

}  // namespace agentsim
