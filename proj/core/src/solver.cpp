#include "agentsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "agentsim/error.hpp"
#include "agentsim/hash.hpp"

namespace agentsim {

Vec2 adapt_velocity(const EstimatedState& candidate, Vec2 control) {
    const double speed = norm(candidate.velocity);
    if (norm(candidate.control_direction) < 0.5) {
        // Dataset control direction was never estimable: rotate the sample
        // so its velocity aligns with the agent's control direction.
        if (norm(control) < kEps) return candidate.velocity;
        return control * speed;
    }
    const Vec2 offset = unit_vector(candidate.velocity) - candidate.control_direction;
    return (control + offset) * speed;
}

VelocityChoice choose_velocity(const DecisionContext& ctx, const EnergyWeights& weights,
                               std::span<const std::uint32_t> candidates,
                               const GroupedDataset& dataset) {
    if (candidates.empty()) throw SolverError("choose_velocity: empty candidate set");
    const auto& states = dataset.states();
    VelocityChoice best;
    best.energy = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const Vec2 v = adapt_velocity(states[candidates[k]], ctx.control_direction);
        const double e = evaluate_candidate_energy(ctx, v, weights);
        if (e < best.energy) {
            best.energy = e;
            best.velocity = v;
            best.candidate_index = k;
        }
    }
    return best;
}

namespace {

Shape inflate_leader_shape(const Shape& shape) {
    // Adds one body length of clearance ahead of a no-overtake follower.
    if (const Circle* c = std::get_if<Circle>(&shape)) return Circle{3.0 * c->radius};
    const Rect& r = std::get<Rect>(shape);
    return Rect{3.0 * r.half_length, r.half_width};
}

double crossing_chord_progress(const Scenario& scn, const Goal& goal, Vec2 p) {
    const Road& from = scn.roads[goal.road_from];
    const Road& to = scn.roads[goal.road_to];
    const Vec2 entry = from.centerline.back();
    const Vec2 chord = to.centerline.front() - entry;
    const double len = norm(chord);
    if (len < kEps) return 1.0;
    return dot(p - entry, chord / len) / len;
}

// Road the agent is currently driving/walking along, or -1.
int current_road_of(const Scenario& scn, const AgentState& a) {
    switch (a.goal.mode) {
        case Goal::Mode::road_follow:
            return a.goal.road_from;
        case Goal::Mode::crossing:
            if (a.kind == AgentKind::pedestrian)
                return a.crossing.active ? -1 : a.goal.road_from;
            return crossing_chord_progress(scn, a.goal, a.position) >= 1.0 ? a.goal.road_to
                                                                           : a.goal.road_from;
        default:
            return -1;
    }
}

}  // namespace

SpatialGrid build_obstacle_grid(const Scenario& scn) {
    SpatialGrid grid(scn.params.cell_size, {0.0, 0.0});
    for (std::size_t i = 0; i < scn.obstacles.size(); ++i) {
        const Body& b = scn.obstacles[i].body;
        const double r = max_radius(b.shape);
        grid.insert_box(static_cast<std::uint32_t>(i), b.position - Vec2{r, r},
                        b.position + Vec2{r, r});
    }
    return grid;
}

Decision decide_agent(const SimState& sim, const Scenario& scn, const GroupedDataset& dataset,
                      const SpatialGrid& obstacle_grid, std::uint32_t index, DecisionMode mode,
                      DecisionScratch& sc) {
    const SimParams& params = scn.params;
    const AgentState& a = sim.agents[index];
    const bool brute = mode == DecisionMode::brute_force;

    Decision out;

    // Crossing-state transition first: the control direction depends on it.
    CrossingState crossing = a.crossing;
    bool swap_roads = false;
    if (a.kind == AgentKind::pedestrian && a.goal.mode == Goal::Mode::crossing) {
        if (!crossing.active) {
            if (hash_u01(params.seed, static_cast<std::uint64_t>(sim.frame), a.id) <
                params.crossing_probability)
                crossing.active = true;
        } else {
            const Road& target = scn.roads[a.goal.road_to];
            if (target.project(a.position).distance <= target.half_width()) {
                crossing.active = false;
                swap_roads = true;  // the target walkway becomes the new home
            }
        }
    }

    AgentState view = a;
    view.crossing = crossing;
    if (swap_roads) std::swap(view.goal.road_from, view.goal.road_to);
    const Vec2 cd = control_direction(scn, view, a.position, sim.time);
    view.control_direction = cd;

    // Neighbor candidates, ascending id so both modes accumulate sums in the
    // same order.
    sc.ids.clear();
    if (brute) {
        for (std::uint32_t j = 0; j < sim.agents.size(); ++j)
            if (j != index) sc.ids.push_back(j);
    } else {
        sim.grid.query_block(a.position, index, sc.ids);
        std::sort(sc.ids.begin(), sc.ids.end());
    }

    // Nearest same-lane leader for no-overtake agents: an attraction target
    // and an inflated collision neighbor, which blocks passing.
    int leader = -1;
    const int own_road = current_road_of(scn, view);
    if (view.overtake == OvertakeClass::no_overtake && own_road >= 0) {
        const Road& road = scn.roads[own_road];
        const RoadProjection self_proj = road.project(a.position);
        const int self_lane = road.lane_index(self_proj.lateral);
        double best_gap = std::numeric_limits<double>::infinity();
        for (const std::uint32_t j : sc.ids) {
            const AgentState& b = sim.agents[j];
            if (current_road_of(scn, b) != own_road) continue;
            const RoadProjection proj = road.project(b.position);
            if (road.lane_index(proj.lateral) != self_lane) continue;
            const double gap = proj.arc_pos - self_proj.arc_pos;
            if (gap <= 0.0 || gap >= best_gap) continue;
            best_gap = gap;
            leader = static_cast<int>(j);
        }
    }

    sc.collision_pool.clear();
    sc.attraction_pool.clear();
    for (const std::uint32_t j : sc.ids) {
        const AgentState& b = sim.agents[j];
        Body body = b.body();
        if (static_cast<int>(j) == leader) body.shape = inflate_leader_shape(body.shape);
        sc.collision_pool.push_back(body);
        if (a.group_id >= 0 && b.group_id == a.group_id)
            sc.attraction_pool.push_back(b.body());
        else if (static_cast<int>(j) == leader)
            sc.attraction_pool.push_back(b.body());
    }

    if (brute) {
        for (const Obstacle& ob : scn.obstacles) sc.collision_pool.push_back(ob.body);
    } else {
        sc.obstacle_ids.clear();
        obstacle_grid.query_block(a.position, std::numeric_limits<std::uint32_t>::max(),
                                  sc.obstacle_ids);
        std::sort(sc.obstacle_ids.begin(), sc.obstacle_ids.end());
        sc.obstacle_ids.erase(std::unique(sc.obstacle_ids.begin(), sc.obstacle_ids.end()),
                              sc.obstacle_ids.end());
        for (const std::uint32_t j : sc.obstacle_ids)
            sc.collision_pool.push_back(scn.obstacles[j].body);
    }

    for (const Attractor& at : scn.attractors) {
        Body body;
        body.position = at.position;
        body.shape = Circle{at.radius};
        sc.attraction_pool.push_back(body);
    }

    // Virtual bodies last, in fixed construction order.
    if (const auto wall = light_gate(scn, view, a.position, a.velocity, sim.time))
        sc.collision_pool.push_back(*wall);

    if (a.kind != AgentKind::pedestrian) {
        // A pedestrian crossing in front suppresses the pull toward the
        // leader and adds a static blocker at its position.
        const double range = norm(a.velocity) * params.horizon() + params.d_c;
        double best_ahead = std::numeric_limits<double>::infinity();
        int blocker = -1;
        const double lane_tol =
            own_road >= 0 ? 0.75 * scn.roads[own_road].lane_width : 2.5;
        for (const std::uint32_t j : sc.ids) {
            const AgentState& b = sim.agents[j];
            if (b.kind != AgentKind::pedestrian || !b.crossing.active) continue;
            const Vec2 rel = b.position - a.position;
            const double ahead = dot(rel, a.heading);
            if (ahead <= 0.0 || ahead > range) continue;
            if (std::abs(cross(a.heading, rel)) > lane_tol) continue;
            if (ahead >= best_ahead) continue;
            best_ahead = ahead;
            blocker = static_cast<int>(j);
        }
        if (blocker >= 0) {
            sc.attraction_pool.clear();
            const AgentState& b = sim.agents[static_cast<std::uint32_t>(blocker)];
            Body body;
            body.position = b.position;
            body.heading = b.heading;
            body.shape = Circle{max_radius(b.shape) + 0.3};
            sc.collision_pool.push_back(body);
        }
    }

    DecisionContext ctx;
    ctx.self = a.body();
    ctx.control_direction = cd;
    ctx.target_speed = a.target_speed;
    ctx.collision_pool = sc.collision_pool;
    ctx.attraction_pool = sc.attraction_pool;
    ctx.params = params.energy();

    // Adaptation can push an agent's speed beyond the dataset's range; the
    // query group is clamped to the populated groups so the nearest speeds
    // remain reachable.
    const auto [lo_group, hi_group] = dataset.group_bounds(a.kind);
    const int query_group = std::clamp(a.speed_group, lo_group, hi_group);
    const std::span<const std::uint32_t> candidates =
        brute ? dataset.kind_indices(a.kind)
              : dataset.candidate_indices(a.kind, query_group, params.z);
    const VelocityChoice choice = choose_velocity(ctx, scn.weights_for(a.kind), candidates, dataset);

    out.velocity = choice.velocity;
    out.control_direction = cd;
    out.energy = choice.energy;
    out.candidate_index = choice.candidate_index;
    out.crossing = crossing;
    out.swap_crossing_roads = swap_roads;
    return out;
}

Decision brute_force_choose_velocity(const SimState& sim, const Scenario& scn,
                                     const GroupedDataset& dataset, std::uint32_t index) {
    DecisionScratch scratch;
    const SpatialGrid obstacle_grid = build_obstacle_grid(scn);
    return decide_agent(sim, scn, dataset, obstacle_grid, index, DecisionMode::brute_force,
                        scratch);
}

namespace {

void rebuild_agent_grid(SimState& sim, double cell_size) {
    sim.grid = SpatialGrid(cell_size, {0.0, 0.0});
    for (const AgentState& a : sim.agents) sim.grid.insert(a.id, a.position);
}

}  // namespace

SimState make_sim_state(const Scenario& scn, const GroupedDataset& dataset, std::uint64_t seed) {
    SimState sim;
    sim.agents = initialize_agents(scn, dataset, seed);
    rebuild_agent_grid(sim, scn.params.cell_size);
    return sim;
}

void step(SimState& sim, const Scenario& scn, const GroupedDataset& dataset,
          const StepOptions& options) {
    const std::size_t n = sim.agents.size();
    const SpatialGrid obstacle_grid = build_obstacle_grid(scn);
    std::vector<Decision> decisions(n);

    const int workers =
        std::clamp(options.workers, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        DecisionScratch scratch;
        for (std::uint32_t i = 0; i < n; ++i)
            decisions[i] =
                decide_agent(sim, scn, dataset, obstacle_grid, i, options.mode, scratch);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr first_error;
        std::mutex error_mutex;
        for (int w = 0; w < workers; ++w) {
            const std::size_t begin = n * static_cast<std::size_t>(w) / workers;
            const std::size_t end = n * static_cast<std::size_t>(w + 1) / workers;
            pool.emplace_back([&, begin, end] {
                DecisionScratch scratch;
                try {
                    for (std::size_t i = begin; i < end; ++i)
                        decisions[i] = decide_agent(sim, scn, dataset, obstacle_grid,
                                                    static_cast<std::uint32_t>(i), options.mode,
                                                    scratch);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    const double dt = scn.params.dt;
    for (std::size_t i = 0; i < n; ++i) {
        AgentState& a = sim.agents[i];
        const Decision& d = decisions[i];
        a.velocity = d.velocity;
        a.control_direction = d.control_direction;
        a.crossing = d.crossing;
        if (d.swap_crossing_roads) std::swap(a.goal.road_from, a.goal.road_to);
        a.position = a.position + a.velocity * dt;
        if (norm(a.velocity) >= kEps) a.heading = unit_vector(a.velocity);
        a.speed_group = dataset.group_of_speed(norm(a.velocity));
    }
    sim.frame += 1;
    sim.time = sim.frame * dt;
    rebuild_agent_grid(sim, scn.params.cell_size);
}

TrajectoryLog run(const Scenario& scn, const GroupedDataset& dataset, int frames,
                  const RunOptions& options) {
    if (frames < 1) throw ValidationError("run: frames must be >= 1");
    if (options.warn_grid)
        if (const auto warning = grid_condition_warning(scn, dataset))
            std::fprintf(stderr, "warning: %s\n", warning->c_str());

    SimState sim = make_sim_state(scn, dataset, scn.params.seed);
    TrajectoryLog log;
    log.append_frame(0, sim.agents);
    const StepOptions step_options{options.workers, options.mode};
    const int log_every = std::max(1, options.log_every);
    for (int f = 1; f <= frames; ++f) {
        try {
            step(sim, scn, dataset, step_options);
        } catch (const Error& e) {
            throw SolverError("frame " + std::to_string(f) + ": " + e.what());
        }
        if (f % log_every == 0 || f == frames) log.append_frame(sim.frame, sim.agents);
    }
    return log;
}

std::optional<std::string> grid_condition_warning(const Scenario& scn,
                                                  const GroupedDataset& dataset) {
    double max_shape = 0.0;
    bool any_no_overtake = false;
    for (const AgentSpec& spec : scn.agent_specs) {
        max_shape = std::max(max_shape, max_radius(spec.shape));
        any_no_overtake |= spec.overtake == OvertakeClass::no_overtake;
    }
    if (any_no_overtake)
        for (const AgentSpec& spec : scn.agent_specs)
            max_shape = std::max(max_shape, max_radius(inflate_leader_shape(spec.shape)));

    const double bound =
        grid_equivalence_bound(scn.params.d_c, scn.params.d_a_max, max_shape,
                               dataset.max_adapted_speed(), scn.params.horizon());
    if (scn.params.cell_size >= bound) return std::nullopt;
    return "cell_size " + format_double_roundtrip(scn.params.cell_size) +
           " is below the grid equivalence bound " + format_double_roundtrip(bound) +
           "; 3x3 block neighborhoods may miss distant members";
}

}  // namespace agentsim
