#pragma once

#include <optional>
#include <span>
#include <string>

#include "agentsim/geometry.hpp"

namespace agentsim {

// Per-kind weight set. Outer weights scale whole families; the inner weights
// mirror the per-scenario configuration columns (direction/speed continuity,
// instantaneous/anticipated collision, and the two user-constraint terms).
struct EnergyWeights {
    double continuity = 1.0;             // outer, families below
    double continuity_direction = 0.0;   // unit-direction mismatch with the previous velocity
    double continuity_speed = 0.0;       // speed-magnitude mismatch
    double collision = 1.0;              // outer
    double collision_instant = 0.0;      // horizon dt
    double collision_anticipated = 0.0;  // horizon T*dt
    double attraction = 0.0;
    double direction = 0.0;              // control-direction alignment
    double constraint = 1.0;             // outer, the two user constraints below
    double speed_goal = 0.0;             // |speed - reference speed|
    double lane_keep = 0.0;              // cross-lane velocity component
    std::optional<double> target_speed;  // per-kind reference speed for speed_goal
};

// Throws ValidationError unless all weights are >= 0 and at least one
// effective term weight is positive. `path` names the config location.
void validate_weights(const EnergyWeights& w, const std::string& path);

struct EnergyParams {
    double dt = 0.1;
    int anticipation_steps = 10;  // T
    double d_c = 2.0;             // collision threshold distance
    double d_a = 2.0;             // attraction lower threshold
    double d_a_max = 6.0;         // attraction upper cap
};

// Inputs for one velocity evaluation with the neighborhoods already
// resolved. self.velocity carries the agent's previous-frame velocity.
struct EnergyContext {
    Body self;
    Vec2 control_direction;
    std::optional<double> target_speed;
    std::span<const Body> collision_neighbors_now;          // members at horizon dt
    std::span<const Body> collision_neighbors_anticipated;  // members at horizon T*dt
    std::span<const Body> attraction_targets;
    EnergyParams params;
};

// --- individual terms ---

double continuity_energy(Vec2 prev, Vec2 v, double w_dir, double w_speed);

// Mean over the given neighbors of exp(d_c - d(dt, self, Q, v)); zero when
// the list is empty. Negative clearances are passed through the exponential
// unclamped, so interpenetration explodes the cost.
double instantaneous_collision_energy(const EnergyContext& ctx, Vec2 v);

// Same form at horizon T*dt over the anticipated neighbor list.
double anticipatory_collision_energy(const EnergyContext& ctx, Vec2 v);

// Mean over targets of the squared predicted clearance at horizon dt.
double attraction_energy(const EnergyContext& ctx, Vec2 v);

double direction_energy(Vec2 control, Vec2 v);

double speed_control_energy(Vec2 v, double target_speed);

// |v . perp(control)|: penalizes drift across the control direction, which
// keeps vehicles in the middle of their lane.
double lane_constraint_energy(Vec2 v, Vec2 control);

// Weighted sum of all families over the context's neighbor lists.
double total_energy(const EnergyContext& ctx, Vec2 v, const EnergyWeights& w);

// --- fused evaluation for the solver ---

// Same computation as filtering the pools with the neighborhood rules
// (collision: d < d_c at the respective horizon; attraction:
// d_a < d <= d_a_max) and then calling total_energy; done in one pass so the
// per-candidate inner loop allocates nothing. Pools must already be in
// canonical order (ascending agent id, then obstacles, then virtual bodies):
// both solver paths then accumulate bit-identical sums.
struct DecisionContext {
    Body self;
    Vec2 control_direction;
    std::optional<double> target_speed;
    std::span<const Body> collision_pool;
    std::span<const Body> attraction_pool;
    EnergyParams params;
};

double evaluate_candidate_energy(const DecisionContext& ctx, Vec2 v, const EnergyWeights& w);

}  // namespace agentsim
