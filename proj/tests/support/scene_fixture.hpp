#pragma once

// Randomized oracle scenes shared by the solver tests and the acceptance
// suite: two point-goal pedestrian groups with cohesion, a couple of
// obstacles and an attractor, sized so the grid equivalence condition holds.

#include <random>

#include "agentsim/dataset.hpp"
#include "agentsim/scenario.hpp"
#include "agentsim/solver.hpp"
#include "agentsim/spatial.hpp"

namespace agentsim::testing {

struct SceneFixture {
    Scenario scenario;
    GroupedDataset dataset;
};

inline SceneFixture make_random_scene(std::uint64_t seed, int n_agents, int n_states) {
    std::mt19937_64 rng(seed ^ 0xabcdef12345ULL);
    std::uniform_real_distribution<double> u(0.2, 1.5);

    SynthSpec synth;
    synth.kinds = {AgentKind::pedestrian};
    synth.speed_min = 0.3;
    synth.speed_max = 2.2;
    synth.count_per_kind = n_states;
    synth.seed = seed * 7919 + 13;

    SceneFixture fx{Scenario{}, group_by_speed(synthesize_dataset(synth), 0.5)};
    Scenario& scn = fx.scenario;

    const double side = n_agents <= 100 ? 50.0 : 140.0;
    scn.params.bounds_min = {0.0, 0.0};
    scn.params.bounds_max = {side, side};
    scn.params.dt = 0.1;
    scn.params.anticipation_steps = 10;
    scn.params.d_c = 2.0;
    scn.params.d_a = 2.0;
    scn.params.d_a_max = 6.0;
    scn.params.bin_width = 0.5;
    scn.params.seed = seed;
    scn.params.z = 2;
    scn.params.cell_size =
        grid_equivalence_bound(scn.params.d_c, scn.params.d_a_max, 0.5,
                               fx.dataset.max_adapted_speed(), scn.params.horizon()) +
        0.5;

    EnergyWeights w;
    w.continuity_direction = u(rng);
    w.continuity_speed = u(rng);
    w.collision_instant = u(rng);
    w.collision_anticipated = u(rng);
    w.attraction = 0.4 * u(rng);
    w.direction = u(rng);
    w.speed_goal = 0.3 * u(rng);
    scn.weights[static_cast<std::size_t>(AgentKind::pedestrian)] = w;

    Obstacle pillar;
    pillar.name = "pillar";
    pillar.body.position = {side * 0.5, side * 0.45};
    pillar.body.shape = Circle{0.5};
    scn.obstacles.push_back(pillar);
    Obstacle block;
    block.name = "block";
    block.body.position = {side * 0.3, side * 0.6};
    block.body.heading = {1.0, 0.0};
    block.body.shape = Rect{0.5, 0.5};
    scn.obstacles.push_back(block);

    Attractor beacon;
    beacon.name = "beacon";
    beacon.position = {side * 0.7, side * 0.3};
    beacon.radius = 0.5;
    scn.attractors.push_back(beacon);

    AgentSpec a;
    a.name = "group_a";
    a.kind = AgentKind::pedestrian;
    a.count = n_agents / 2;
    a.shape = Circle{0.25};
    a.placement.mode = Placement::Mode::region;
    a.placement.rect_min = {2.0, 2.0};
    a.placement.rect_max = {side * 0.48, side - 2.0};
    a.goal.mode = Goal::Mode::point;
    a.goal.point = {side - 2.0, side * 0.5};
    a.group_id = 1;
    AgentSpec b = a;
    b.name = "group_b";
    b.count = n_agents - a.count;
    b.placement.rect_min = {side * 0.52, 2.0};
    b.placement.rect_max = {side - 2.0, side - 2.0};
    b.goal.point = {2.0, side * 0.5};
    b.group_id = 2;
    scn.agent_specs = {a, b};
    return fx;
}

}  // namespace agentsim::testing
