#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agentsim/agent.hpp"
#include "agentsim/dataset.hpp"
#include "agentsim/energy.hpp"
#include "agentsim/geometry.hpp"

namespace agentsim {

struct SimParams {
    Vec2 bounds_min;
    Vec2 bounds_max;
    double dt = 0.1;
    int anticipation_steps = 10;
    double d_c = 2.0;
    double d_a = 2.0;
    double d_a_max = 6.0;  // attraction cap, defaults to 3 * d_a
    double cell_size = 10.0;
    int z = 2;
    double bin_width = 0.5;
    std::uint64_t seed = 0;
    double crossing_probability = 0.01;  // per frame, pedestrians with a crossing goal

    EnergyParams energy() const { return {dt, anticipation_steps, d_c, d_a, d_a_max}; }
    double horizon() const { return anticipation_steps * dt; }
};

struct RoadProjection {
    int segment = 0;
    double arc_pos = 0.0;   // arclength of the projected point
    double lateral = 0.0;   // signed offset, positive left of travel
    double distance = 0.0;  // unsigned distance to the centerline
    Vec2 tangent{1.0, 0.0};
    Vec2 point;
};

struct Road {
    std::string name;
    std::vector<Vec2> centerline;
    int lane_count = 1;
    double lane_width = 3.5;
    std::vector<double> cum_length;  // per vertex, filled by finalize()

    void finalize();
    double total_length() const { return cum_length.empty() ? 0.0 : cum_length.back(); }
    double half_width() const { return 0.5 * lane_count * lane_width; }

    RoadProjection project(Vec2 p) const;
    Vec2 point_at(double arc) const;
    Vec2 tangent_at(double arc) const;
    Vec2 start_tangent() const;
    Vec2 end_tangent() const;

    // Lane index from a signed lateral offset, clamped to [0, lane_count).
    int lane_index(double lateral) const;
    double lane_center_offset(int lane) const;
};

struct LightPhase {
    enum class Color : std::uint8_t { green, red } color = Color::green;
    double duration = 0.0;
};

struct TrafficLight {
    std::string name;
    Vec2 stop_a, stop_b;  // stop line segment endpoints
    std::vector<LightPhase> cycle;
    int road = -1;
    Vec2 approach{1.0, 0.0};  // unit direction of the gated travel

    LightPhase::Color phase_at(double t) const;
};

struct Obstacle {
    std::string name;
    Body body;  // zero velocity
};

struct Attractor {
    std::string name;
    Vec2 position;
    double radius = 0.5;
};

struct Placement {
    enum class Mode : std::uint8_t { region, roadside, circle } mode = Mode::region;
    Vec2 rect_min, rect_max;  // region
    int road = -1;            // roadside
    Vec2 center;              // circle
    double radius = 0.0;      // circle
};

struct AgentSpec {
    std::string name;
    AgentKind kind = AgentKind::pedestrian;
    int count = 1;
    Shape shape = Circle{0.25};
    Placement placement;
    Goal goal;  // road indices resolved; fixed_direction resolved at initialization
    int group_id = -1;
    OvertakeClass overtake = OvertakeClass::can_overtake;
};

struct Scenario {
    SimParams params;
    std::array<std::optional<EnergyWeights>, kKindCount> weights;
    std::vector<Obstacle> obstacles;
    std::vector<Attractor> attractors;
    std::vector<Road> roads;
    std::vector<TrafficLight> lights;
    std::vector<AgentSpec> agent_specs;

    const EnergyWeights& weights_for(AgentKind kind) const;
    int road_index(const std::string& name) const;  // -1 when absent
    Vec2 bounds_center() const { return (params.bounds_min + params.bounds_max) * 0.5; }
};

// Parses and fully validates the sectioned key-value scenario text; all
// defaults are filled in. Errors name the offending section.key path.
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// Canonical normalized form: load_scenario(dump_scenario(s)) is a fixed
// point and dump(load(dump(x))) == dump(x).
std::string dump_scenario(const Scenario& scenario);

// The control-direction function: the unit routing direction for `agent`
// standing at `p` at time `t` (norm 1, or 0 when arrived).
Vec2 control_direction(const Scenario& scenario, const AgentState& agent, Vec2 p, double t);

// Places every agent spec (rejection sampling against already placed agents
// and obstacles), draws an initial velocity of the matching kind from the
// dataset and adapts it to the initial control direction. Deterministic for
// a fixed seed.
std::vector<AgentState> initialize_agents(const Scenario& scenario, const GroupedDataset& dataset,
                                          std::uint64_t seed);

// Red-light stop directive: a virtual static wall on the stop line, emitted
// when the agent could reach the line within the anticipation horizon plus
// the collision threshold. Consumed by the solver as an extra obstacle.
std::optional<Body> light_gate(const Scenario& scenario, const AgentState& agent, Vec2 p, Vec2 v,
                               double t);

}  // namespace agentsim
