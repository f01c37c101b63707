#include "agentsim/energy.hpp"

#include <cmath>

#include "agentsim/error.hpp"

namespace agentsim {

void validate_weights(const EnergyWeights& w, const std::string& path) {
    const double all[] = {w.continuity,  w.continuity_direction, w.continuity_speed,
                          w.collision,   w.collision_instant,    w.collision_anticipated,
                          w.attraction,  w.direction,            w.constraint,
                          w.speed_goal,  w.lane_keep};
    for (const double v : all)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError(path + ": weights must be finite and >= 0");
    const double effective = w.continuity * (w.continuity_direction + w.continuity_speed) +
                             w.collision * (w.collision_instant + w.collision_anticipated) +
                             w.attraction + w.direction +
                             w.constraint * (w.speed_goal + w.lane_keep);
    if (!(effective > 0.0)) throw ValidationError(path + ": at least one weight must be > 0");
    if (w.target_speed && (!(*w.target_speed >= 0.0) || !std::isfinite(*w.target_speed)))
        throw ValidationError(path + ": target_speed must be finite and >= 0");
}

double continuity_energy(Vec2 prev, Vec2 v, double w_dir, double w_speed) {
    const double dir_term = norm(unit_vector(prev) - unit_vector(v));
    const double speed_term = std::abs(norm(prev) - norm(v));
    return w_dir * dir_term + w_speed * speed_term;
}

namespace {

double mean_exp_clearance(const Body& self, Vec2 v, std::span<const Body> neighbors, double t,
                          double d_c) {
    if (neighbors.empty()) return 0.0;
    double sum = 0.0;
    for (const Body& q : neighbors) sum += std::exp(d_c - predicted_distance(self, v, q, t));
    return sum / static_cast<double>(neighbors.size());
}

}  // namespace

double instantaneous_collision_energy(const EnergyContext& ctx, Vec2 v) {
    return mean_exp_clearance(ctx.self, v, ctx.collision_neighbors_now, ctx.params.dt,
                              ctx.params.d_c);
}

double anticipatory_collision_energy(const EnergyContext& ctx, Vec2 v) {
    const double horizon = ctx.params.anticipation_steps * ctx.params.dt;
    return mean_exp_clearance(ctx.self, v, ctx.collision_neighbors_anticipated, horizon,
                              ctx.params.d_c);
}

double attraction_energy(const EnergyContext& ctx, Vec2 v) {
    if (ctx.attraction_targets.empty()) return 0.0;
    double sum = 0.0;
    for (const Body& q : ctx.attraction_targets) {
        const double d = predicted_distance(ctx.self, v, q, ctx.params.dt);
        sum += d * d;
    }
    return sum / static_cast<double>(ctx.attraction_targets.size());
}

double direction_energy(Vec2 control, Vec2 v) { return norm(control - unit_vector(v)); }

double speed_control_energy(Vec2 v, double target_speed) {
    return std::abs(norm(v) - target_speed);
}

double lane_constraint_energy(Vec2 v, Vec2 control) { return std::abs(dot(v, perp(control))); }

double total_energy(const EnergyContext& ctx, Vec2 v, const EnergyWeights& w) {
    const double e_m =
        continuity_energy(ctx.self.velocity, v, w.continuity_direction, w.continuity_speed);
    const double e_c = w.collision_instant * instantaneous_collision_energy(ctx, v) +
                       w.collision_anticipated * anticipatory_collision_energy(ctx, v);
    const double e_a = attraction_energy(ctx, v);
    const double e_d = direction_energy(ctx.control_direction, v);
    double e_s = w.lane_keep * lane_constraint_energy(v, ctx.control_direction);
    if (ctx.target_speed) e_s += w.speed_goal * speed_control_energy(v, *ctx.target_speed);
    return w.continuity * e_m + w.collision * e_c + w.attraction * e_a + w.direction * e_d +
           w.constraint * e_s;
}

double evaluate_candidate_energy(const DecisionContext& ctx, Vec2 v, const EnergyWeights& w) {
    const EnergyParams& p = ctx.params;
    const double horizon = p.anticipation_steps * p.dt;

    double sum_ins = 0.0, sum_anti = 0.0, sum_att = 0.0;
    std::size_t n_ins = 0, n_anti = 0, n_att = 0;
    for (const Body& q : ctx.collision_pool) {
        const double d_now = predicted_distance(ctx.self, v, q, p.dt);
        if (d_now < p.d_c) {
            sum_ins += std::exp(p.d_c - d_now);
            ++n_ins;
        }
        const double d_horizon = predicted_distance(ctx.self, v, q, horizon);
        if (d_horizon < p.d_c) {
            sum_anti += std::exp(p.d_c - d_horizon);
            ++n_anti;
        }
    }
    for (const Body& q : ctx.attraction_pool) {
        const double d = predicted_distance(ctx.self, v, q, p.dt);
        if (d > p.d_a && d <= p.d_a_max) {
            sum_att += d * d;
            ++n_att;
        }
    }

    const double e_m =
        continuity_energy(ctx.self.velocity, v, w.continuity_direction, w.continuity_speed);
    const double e_ins = n_ins ? sum_ins / static_cast<double>(n_ins) : 0.0;
    const double e_anti = n_anti ? sum_anti / static_cast<double>(n_anti) : 0.0;
    const double e_c = w.collision_instant * e_ins + w.collision_anticipated * e_anti;
    const double e_a = n_att ? sum_att / static_cast<double>(n_att) : 0.0;
    const double e_d = direction_energy(ctx.control_direction, v);
    double e_s = w.lane_keep * lane_constraint_energy(v, ctx.control_direction);
    if (ctx.target_speed) e_s += w.speed_goal * speed_control_energy(v, *ctx.target_speed);
    return w.continuity * e_m + w.collision * e_c + w.attraction * e_a + w.direction * e_d +
           w.constraint * e_s;
}

}  // namespace agentsim
