#pragma once

#include <cstdint>

#include "agentsim/dataset.hpp"
#include "agentsim/geometry.hpp"

namespace agentsim {

enum class OvertakeClass : std::uint8_t { can_overtake, no_overtake };

// Routing intent resolved at initialization from the agent spec.
struct Goal {
    enum class Mode : std::uint8_t { point, road_follow, opposite_side, crossing } mode =
        Mode::point;
    Vec2 point;           // point mode
    Vec2 fixed_direction; // opposite_side mode
    int road_from = -1;   // road_follow / crossing
    int road_to = -1;     // crossing
};

// Traffic-crossing bookkeeping for pedestrians that may leave their walkway.
struct CrossingState {
    bool active = false;  // currently on the carriageway, heading for road_to
};

struct AgentState {
    std::uint32_t id = 0;
    AgentKind kind = AgentKind::pedestrian;
    Vec2 position;
    Vec2 velocity;
    Vec2 control_direction;  // unit or zero
    Shape shape = Circle{0.25};
    int group_id = -1;       // cohesion group, -1 = none
    int speed_group = 0;     // floor(|velocity| / bin_width)
    double target_speed = 0.0;
    Vec2 heading{1.0, 0.0};  // last nonzero velocity direction
    Goal goal;
    OvertakeClass overtake = OvertakeClass::can_overtake;
    int spec_index = -1;     // agent spec this state was created from
    CrossingState crossing;

    Body body() const { return {position, velocity, heading, shape}; }
};

}  // namespace agentsim
