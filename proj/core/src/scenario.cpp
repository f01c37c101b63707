#include "agentsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "agentsim/error.hpp"
#include "agentsim/solver.hpp"
#include "ini.hpp"

namespace agentsim {

namespace {

// Shortest decimal form that round-trips; keeps dumps stable under
// repeated load/dump cycles.
std::string format_double(double v) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::string item =
            s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto first = item.find_first_not_of(" \t");
        if (first != std::string::npos) {
            const auto last = item.find_last_not_of(" \t");
            out.push_back(item.substr(first, last - first + 1));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double to_double(const std::string& tok, const std::string& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(path + ": expected a number, got '" + tok + "'");
    }
}

long to_long(const std::string& tok, const std::string& path) {
    try {
        std::size_t used = 0;
        const long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(path + ": expected an integer, got '" + tok + "'");
    }
}

Vec2 to_vec2(const std::string& value, const std::string& path) {
    const auto toks = split_ws(value);
    if (toks.size() != 2) throw ValidationError(path + ": expected two numbers");
    return {to_double(toks[0], path), to_double(toks[1], path)};
}

Shape to_shape(const std::string& value, const std::string& path) {
    const auto toks = split_ws(value);
    if (toks.size() == 2 && toks[0] == "circle") return Circle{to_double(toks[1], path)};
    if (toks.size() == 3 && toks[0] == "rect")
        return Rect{to_double(toks[1], path), to_double(toks[2], path)};
    throw ValidationError(path + ": expected 'circle R' or 'rect HL HW'");
}

std::string shape_text(const Shape& shape) {
    if (const Circle* c = std::get_if<Circle>(&shape))
        return "circle " + format_double(c->radius);
    const Rect& r = std::get<Rect>(shape);
    return "rect " + format_double(r.half_length) + " " + format_double(r.half_width);
}

Shape default_shape(AgentKind kind) {
    switch (kind) {
        case AgentKind::pedestrian: return Circle{0.25};
        case AgentKind::car: return Rect{2.0, 0.9};
        case AgentKind::bicycle: return Rect{0.9, 0.35};
        case AgentKind::tricycle: return Rect{1.25, 0.5};
        case AgentKind::other: return Circle{0.5};
    }
    return Circle{0.25};
}

// Tracks which keys of a section were consumed so leftovers can be reported.
class SectionReader {
public:
    SectionReader(const ini::Section& section, std::string path)
        : section_(section), path_(std::move(path)), used_(section.entries.size(), false) {}

    const std::string* find(const std::string& key) {
        for (std::size_t i = 0; i < section_.entries.size(); ++i) {
            if (section_.entries[i].first == key) {
                used_[i] = true;
                return &section_.entries[i].second;
            }
        }
        return nullptr;
    }

    std::string require(const std::string& key) {
        const std::string* v = find(key);
        if (!v) throw ValidationError(path_ + ": missing required key '" + key + "'");
        return *v;
    }

    std::string path(const std::string& key) const { return path_ + "." + key; }

    void finish() const {
        for (std::size_t i = 0; i < used_.size(); ++i)
            if (!used_[i])
                throw ValidationError(path_ + ": unknown key '" + section_.entries[i].first + "'");
    }

private:
    const ini::Section& section_;
    std::string path_;
    std::vector<bool> used_;
};

Vec2 placement_center(const Placement& pl, const std::vector<Road>& roads) {
    switch (pl.mode) {
        case Placement::Mode::region: return (pl.rect_min + pl.rect_max) * 0.5;
        case Placement::Mode::circle: return pl.center;
        case Placement::Mode::roadside: return roads[pl.road].point_at(0.5 * roads[pl.road].total_length());
    }
    return {};
}

}  // namespace

// --- Road geometry ---

void Road::finalize() {
    cum_length.assign(centerline.size(), 0.0);
    for (std::size_t i = 1; i < centerline.size(); ++i)
        cum_length[i] = cum_length[i - 1] + distance(centerline[i], centerline[i - 1]);
}

RoadProjection Road::project(Vec2 p) const {
    RoadProjection best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < centerline.size(); ++i) {
        const Vec2 a = centerline[i];
        const Vec2 b = centerline[i + 1];
        const Vec2 ab = b - a;
        const double len_sq = norm_sq(ab);
        const double t = len_sq < kEps * kEps ? 0.0 : std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
        const Vec2 q = a + ab * t;
        const double d = distance(p, q);
        if (d < best_dist) {
            best_dist = d;
            best.segment = static_cast<int>(i);
            best.point = q;
            best.tangent = unit_vector(ab);
            best.arc_pos = cum_length[i] + t * std::sqrt(len_sq);
            best.distance = d;
        }
    }
    // signed offset, positive on the left of travel
    best.lateral = cross(best.tangent, p - best.point);
    return best;
}

Vec2 Road::point_at(double arc) const {
    if (centerline.size() < 2) return centerline.empty() ? Vec2{} : centerline.front();
    arc = std::clamp(arc, 0.0, total_length());
    for (std::size_t i = 1; i < centerline.size(); ++i) {
        if (arc <= cum_length[i] || i + 1 == centerline.size()) {
            const double seg = cum_length[i] - cum_length[i - 1];
            const double t = seg < kEps ? 0.0 : (arc - cum_length[i - 1]) / seg;
            return centerline[i - 1] + (centerline[i] - centerline[i - 1]) * t;
        }
    }
    return centerline.back();
}

Vec2 Road::tangent_at(double arc) const {
    if (centerline.size() < 2) return {1.0, 0.0};
    arc = std::clamp(arc, 0.0, total_length());
    for (std::size_t i = 1; i < centerline.size(); ++i)
        if (arc <= cum_length[i] || i + 1 == centerline.size())
            return unit_vector(centerline[i] - centerline[i - 1]);
    return unit_vector(centerline.back() - centerline[centerline.size() - 2]);
}

Vec2 Road::start_tangent() const { return tangent_at(0.0); }
Vec2 Road::end_tangent() const { return tangent_at(total_length()); }

int Road::lane_index(double lateral) const {
    const int lane = static_cast<int>(std::floor((lateral + half_width()) / lane_width));
    return std::clamp(lane, 0, lane_count - 1);
}

double Road::lane_center_offset(int lane) const {
    return (lane + 0.5) * lane_width - half_width();
}

LightPhase::Color TrafficLight::phase_at(double t) const {
    double total = 0.0;
    for (const LightPhase& p : cycle) total += p.duration;
    double u = std::fmod(t, total);
    if (u < 0.0) u += total;
    for (const LightPhase& p : cycle) {
        if (u < p.duration) return p.color;
        u -= p.duration;
    }
    return cycle.back().color;
}

const EnergyWeights& Scenario::weights_for(AgentKind kind) const {
    const auto& w = weights[static_cast<std::size_t>(kind)];
    if (!w)
        throw ValidationError(std::string("no weights configured for kind '") +
                              std::string(to_string(kind)) + "'");
    return *w;
}

int Scenario::road_index(const std::string& name) const {
    for (std::size_t i = 0; i < roads.size(); ++i)
        if (roads[i].name == name) return static_cast<int>(i);
    return -1;
}

// --- Loading ---

Scenario load_scenario(const std::string& text) {
    const ini::Document doc = ini::parse(text);
    Scenario scn;

    const ini::Section* params = doc.find("params");
    if (!params) throw ValidationError("params: section is required");
    {
        SectionReader r(*params, "params");
        const std::string bounds = r.require("bounds");
        const auto toks = split_ws(bounds);
        if (toks.size() != 4) throw ValidationError("params.bounds: expected x0 y0 x1 y1");
        scn.params.bounds_min = {to_double(toks[0], "params.bounds"), to_double(toks[1], "params.bounds")};
        scn.params.bounds_max = {to_double(toks[2], "params.bounds"), to_double(toks[3], "params.bounds")};
        if (!(scn.params.bounds_min.x < scn.params.bounds_max.x) ||
            !(scn.params.bounds_min.y < scn.params.bounds_max.y))
            throw ValidationError("params.bounds: min must be strictly below max");

        if (const auto* v = r.find("dt")) scn.params.dt = to_double(*v, r.path("dt"));
        if (const auto* v = r.find("anticipation_steps"))
            scn.params.anticipation_steps = static_cast<int>(to_long(*v, r.path("anticipation_steps")));
        if (const auto* v = r.find("d_c")) scn.params.d_c = to_double(*v, r.path("d_c"));
        bool have_da_max = false;
        if (const auto* v = r.find("d_a")) scn.params.d_a = to_double(*v, r.path("d_a"));
        if (const auto* v = r.find("d_a_max")) {
            scn.params.d_a_max = to_double(*v, r.path("d_a_max"));
            have_da_max = true;
        }
        if (!have_da_max) scn.params.d_a_max = 3.0 * scn.params.d_a;
        if (const auto* v = r.find("cell_size")) scn.params.cell_size = to_double(*v, r.path("cell_size"));
        if (const auto* v = r.find("z")) scn.params.z = static_cast<int>(to_long(*v, r.path("z")));
        if (const auto* v = r.find("bin_width")) scn.params.bin_width = to_double(*v, r.path("bin_width"));
        if (const auto* v = r.find("seed"))
            scn.params.seed = static_cast<std::uint64_t>(to_long(*v, r.path("seed")));
        if (const auto* v = r.find("crossing_probability"))
            scn.params.crossing_probability = to_double(*v, r.path("crossing_probability"));
        r.finish();

        if (!(scn.params.dt > 0.0)) throw ValidationError("params.dt: must be > 0");
        if (scn.params.anticipation_steps < 1)
            throw ValidationError("params.anticipation_steps: must be >= 1");
        if (!(scn.params.d_c > 0.0)) throw ValidationError("params.d_c: must be > 0");
        if (scn.params.d_a < 0.0) throw ValidationError("params.d_a: must be >= 0");
        if (scn.params.d_a_max < scn.params.d_a)
            throw ValidationError("params.d_a_max: must be >= d_a");
        if (!(scn.params.cell_size > 0.0)) throw ValidationError("params.cell_size: must be > 0");
        if (scn.params.z < 0) throw ValidationError("params.z: must be >= 0");
        if (!(scn.params.bin_width > 0.0)) throw ValidationError("params.bin_width: must be > 0");
        if (!(scn.params.crossing_probability >= 0.0 && scn.params.crossing_probability <= 1.0))
            throw ValidationError("params.crossing_probability: must be in [0, 1]");
    }

    // Roads first: other sections refer to them by name.
    for (const auto& section : doc.sections) {
        if (section.name.rfind("road.", 0) != 0) continue;
        Road road;
        road.name = section.name.substr(5);
        SectionReader r(section, section.name);
        const std::string pts = r.require("centerline");
        for (const std::string& item : split_list(pts))
            road.centerline.push_back(to_vec2(item, r.path("centerline")));
        if (road.centerline.size() < 2)
            throw ValidationError(section.name + ".centerline: need at least 2 points");
        if (const auto* v = r.find("lanes"))
            road.lane_count = static_cast<int>(to_long(*v, r.path("lanes")));
        if (const auto* v = r.find("lane_width"))
            road.lane_width = to_double(*v, r.path("lane_width"));
        r.finish();
        if (road.lane_count < 1) throw ValidationError(section.name + ".lanes: must be >= 1");
        if (!(road.lane_width > 0.0))
            throw ValidationError(section.name + ".lane_width: must be > 0");
        road.finalize();
        if (!(road.total_length() > 0.0))
            throw ValidationError(section.name + ".centerline: zero length");
        scn.roads.push_back(std::move(road));
    }

    for (const auto& section : doc.sections) {
        const std::string& name = section.name;
        if (name == "params" || name.rfind("road.", 0) == 0) continue;

        if (name.rfind("weights.", 0) == 0) {
            const AgentKind kind = [&] {
                try {
                    return parse_kind(name.substr(8));
                } catch (const Error&) {
                    throw ValidationError(name + ": unknown agent kind");
                }
            }();
            SectionReader r(section, name);
            EnergyWeights w;
            if (const auto* v = r.find("continuity")) w.continuity = to_double(*v, r.path("continuity"));
            if (const auto* v = r.find("continuity_direction"))
                w.continuity_direction = to_double(*v, r.path("continuity_direction"));
            if (const auto* v = r.find("continuity_speed"))
                w.continuity_speed = to_double(*v, r.path("continuity_speed"));
            if (const auto* v = r.find("collision")) w.collision = to_double(*v, r.path("collision"));
            if (const auto* v = r.find("collision_instant"))
                w.collision_instant = to_double(*v, r.path("collision_instant"));
            if (const auto* v = r.find("collision_anticipated"))
                w.collision_anticipated = to_double(*v, r.path("collision_anticipated"));
            if (const auto* v = r.find("attraction")) w.attraction = to_double(*v, r.path("attraction"));
            if (const auto* v = r.find("direction")) w.direction = to_double(*v, r.path("direction"));
            if (const auto* v = r.find("constraint")) w.constraint = to_double(*v, r.path("constraint"));
            if (const auto* v = r.find("speed_goal")) w.speed_goal = to_double(*v, r.path("speed_goal"));
            if (const auto* v = r.find("lane_keep")) w.lane_keep = to_double(*v, r.path("lane_keep"));
            if (const auto* v = r.find("target_speed"))
                w.target_speed = to_double(*v, r.path("target_speed"));
            r.finish();
            validate_weights(w, name);
            scn.weights[static_cast<std::size_t>(kind)] = w;
        } else if (name.rfind("obstacle.", 0) == 0) {
            SectionReader r(section, name);
            Obstacle ob;
            ob.name = name.substr(9);
            ob.body.shape = to_shape(r.require("shape"), r.path("shape"));
            try {
                validate_shape(ob.body.shape);
            } catch (const Error& e) {
                throw ValidationError(name + ".shape: " + e.what());
            }
            ob.body.position = to_vec2(r.require("position"), r.path("position"));
            if (const auto* v = r.find("heading"))
                ob.body.heading = unit_vector(to_vec2(*v, r.path("heading")));
            ob.body.velocity = {0.0, 0.0};
            r.finish();
            scn.obstacles.push_back(std::move(ob));
        } else if (name.rfind("attractor.", 0) == 0) {
            SectionReader r(section, name);
            Attractor at;
            at.name = name.substr(10);
            at.position = to_vec2(r.require("position"), r.path("position"));
            if (const auto* v = r.find("radius")) at.radius = to_double(*v, r.path("radius"));
            if (!(at.radius > 0.0)) throw ValidationError(name + ".radius: must be > 0");
            r.finish();
            scn.attractors.push_back(std::move(at));
        } else if (name.rfind("light.", 0) == 0) {
            SectionReader r(section, name);
            TrafficLight light;
            light.name = name.substr(6);
            const auto toks = split_ws(r.require("stop_line"));
            if (toks.size() != 4) throw ValidationError(name + ".stop_line: expected x1 y1 x2 y2");
            light.stop_a = {to_double(toks[0], r.path("stop_line")), to_double(toks[1], r.path("stop_line"))};
            light.stop_b = {to_double(toks[2], r.path("stop_line")), to_double(toks[3], r.path("stop_line"))};
            for (const std::string& item : split_list(r.require("cycle"))) {
                const auto pt = split_ws(item);
                if (pt.size() != 2 || (pt[0] != "green" && pt[0] != "red"))
                    throw ValidationError(name + ".cycle: expected 'green S' / 'red S' entries");
                LightPhase phase;
                phase.color = pt[0] == "green" ? LightPhase::Color::green : LightPhase::Color::red;
                phase.duration = to_double(pt[1], r.path("cycle"));
                if (!(phase.duration > 0.0))
                    throw ValidationError(name + ".cycle: durations must be > 0");
                light.cycle.push_back(phase);
            }
            if (light.cycle.empty()) throw ValidationError(name + ".cycle: must be nonempty");
            const std::string road_name = r.require("road");
            light.road = scn.road_index(road_name);
            if (light.road < 0)
                throw ValidationError(name + ".road: unknown road '" + road_name + "'");
            light.approach = unit_vector(to_vec2(r.require("approach"), r.path("approach")));
            if (norm(light.approach) < 0.5)
                throw ValidationError(name + ".approach: must be a nonzero direction");
            r.finish();
            scn.lights.push_back(std::move(light));
        } else if (name.rfind("agents.", 0) == 0) {
            SectionReader r(section, name);
            AgentSpec spec;
            spec.name = name.substr(7);
            try {
                spec.kind = parse_kind(r.require("kind"));
            } catch (const ParseError& e) {
                throw ValidationError(name + ".kind: " + e.what());
            }
            spec.count = static_cast<int>(to_long(r.require("count"), r.path("count")));
            if (spec.count < 1) throw ValidationError(name + ".count: must be >= 1");
            spec.shape = default_shape(spec.kind);
            if (const auto* v = r.find("shape")) spec.shape = to_shape(*v, r.path("shape"));
            try {
                validate_shape(spec.shape);
            } catch (const Error& e) {
                throw ValidationError(name + ".shape: " + e.what());
            }

            const auto pl = split_ws(r.require("placement"));
            const std::string pl_path = r.path("placement");
            if (pl.size() == 5 && pl[0] == "region") {
                spec.placement.mode = Placement::Mode::region;
                spec.placement.rect_min = {to_double(pl[1], pl_path), to_double(pl[2], pl_path)};
                spec.placement.rect_max = {to_double(pl[3], pl_path), to_double(pl[4], pl_path)};
                if (!(spec.placement.rect_min.x <= spec.placement.rect_max.x) ||
                    !(spec.placement.rect_min.y <= spec.placement.rect_max.y))
                    throw ValidationError(pl_path + ": region min must not exceed max");
            } else if (pl.size() == 2 && pl[0] == "roadside") {
                spec.placement.mode = Placement::Mode::roadside;
                spec.placement.road = scn.road_index(pl[1]);
                if (spec.placement.road < 0)
                    throw ValidationError(pl_path + ": unknown road '" + pl[1] + "'");
            } else if (pl.size() == 4 && pl[0] == "circle") {
                spec.placement.mode = Placement::Mode::circle;
                spec.placement.center = {to_double(pl[1], pl_path), to_double(pl[2], pl_path)};
                spec.placement.radius = to_double(pl[3], pl_path);
                if (spec.placement.radius < 0.0)
                    throw ValidationError(pl_path + ": radius must be >= 0");
            } else {
                throw ValidationError(pl_path +
                                      ": expected 'region x0 y0 x1 y1', 'roadside R' or 'circle cx cy r'");
            }

            const auto gl = split_ws(r.require("goal"));
            const std::string gl_path = r.path("goal");
            if (gl.size() == 3 && gl[0] == "point") {
                spec.goal.mode = Goal::Mode::point;
                spec.goal.point = {to_double(gl[1], gl_path), to_double(gl[2], gl_path)};
            } else if (gl.size() == 2 && gl[0] == "road_follow") {
                spec.goal.mode = Goal::Mode::road_follow;
                spec.goal.road_from = scn.road_index(gl[1]);
                if (spec.goal.road_from < 0)
                    throw ValidationError(gl_path + ": unknown road '" + gl[1] + "'");
            } else if (gl.size() == 1 && gl[0] == "opposite_side") {
                spec.goal.mode = Goal::Mode::opposite_side;
            } else if (gl.size() == 3 && gl[0] == "crossing") {
                spec.goal.mode = Goal::Mode::crossing;
                spec.goal.road_from = scn.road_index(gl[1]);
                spec.goal.road_to = scn.road_index(gl[2]);
                if (spec.goal.road_from < 0)
                    throw ValidationError(gl_path + ": unknown road '" + gl[1] + "'");
                if (spec.goal.road_to < 0)
                    throw ValidationError(gl_path + ": unknown road '" + gl[2] + "'");
            } else {
                throw ValidationError(
                    gl_path + ": expected 'point x y', 'road_follow R', 'opposite_side' or 'crossing A B'");
            }

            if (const auto* v = r.find("group"))
                spec.group_id = static_cast<int>(to_long(*v, r.path("group")));
            if (const auto* v = r.find("overtake")) {
                if (*v == "can") spec.overtake = OvertakeClass::can_overtake;
                else if (*v == "no") spec.overtake = OvertakeClass::no_overtake;
                else throw ValidationError(r.path("overtake") + ": expected 'can' or 'no'");
            }
            r.finish();
            scn.agent_specs.push_back(std::move(spec));
        } else {
            throw ValidationError(name + ": unknown section");
        }
    }

    for (const AgentSpec& spec : scn.agent_specs)
        if (!scn.weights[static_cast<std::size_t>(spec.kind)])
            throw ValidationError("agents." + spec.name + ": no [weights." +
                                  std::string(to_string(spec.kind)) + "] section for this kind");

    if (scn.agent_specs.empty()) throw ValidationError("scenario defines no agents");
    return scn;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return load_scenario(buf.str());
    } catch (const Error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

// --- Dump ---

namespace {

void dump_kv(std::string& out, const char* key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
}

std::string vec_text(Vec2 v) { return format_double(v.x) + " " + format_double(v.y); }

}  // namespace

std::string dump_scenario(const Scenario& scn) {
    std::string out;
    const SimParams& p = scn.params;
    out += "[params]\n";
    dump_kv(out, "bounds", vec_text(p.bounds_min) + " " + vec_text(p.bounds_max));
    dump_kv(out, "dt", format_double(p.dt));
    dump_kv(out, "anticipation_steps", std::to_string(p.anticipation_steps));
    dump_kv(out, "d_c", format_double(p.d_c));
    dump_kv(out, "d_a", format_double(p.d_a));
    dump_kv(out, "d_a_max", format_double(p.d_a_max));
    dump_kv(out, "cell_size", format_double(p.cell_size));
    dump_kv(out, "z", std::to_string(p.z));
    dump_kv(out, "bin_width", format_double(p.bin_width));
    dump_kv(out, "seed", std::to_string(p.seed));
    dump_kv(out, "crossing_probability", format_double(p.crossing_probability));

    for (int k = 0; k < kKindCount; ++k) {
        const auto& w = scn.weights[k];
        if (!w) continue;
        out += "\n[weights." + std::string(to_string(static_cast<AgentKind>(k))) + "]\n";
        dump_kv(out, "continuity", format_double(w->continuity));
        dump_kv(out, "continuity_direction", format_double(w->continuity_direction));
        dump_kv(out, "continuity_speed", format_double(w->continuity_speed));
        dump_kv(out, "collision", format_double(w->collision));
        dump_kv(out, "collision_instant", format_double(w->collision_instant));
        dump_kv(out, "collision_anticipated", format_double(w->collision_anticipated));
        dump_kv(out, "attraction", format_double(w->attraction));
        dump_kv(out, "direction", format_double(w->direction));
        dump_kv(out, "constraint", format_double(w->constraint));
        dump_kv(out, "speed_goal", format_double(w->speed_goal));
        dump_kv(out, "lane_keep", format_double(w->lane_keep));
        if (w->target_speed) dump_kv(out, "target_speed", format_double(*w->target_speed));
    }

    for (const Road& road : scn.roads) {
        out += "\n[road." + road.name + "]\n";
        std::string pts;
        for (std::size_t i = 0; i < road.centerline.size(); ++i) {
            if (i) pts += ", ";
            pts += vec_text(road.centerline[i]);
        }
        dump_kv(out, "centerline", pts);
        dump_kv(out, "lanes", std::to_string(road.lane_count));
        dump_kv(out, "lane_width", format_double(road.lane_width));
    }

    for (const Obstacle& ob : scn.obstacles) {
        out += "\n[obstacle." + ob.name + "]\n";
        dump_kv(out, "shape", shape_text(ob.body.shape));
        dump_kv(out, "position", vec_text(ob.body.position));
        dump_kv(out, "heading", vec_text(ob.body.heading));
    }

    for (const Attractor& at : scn.attractors) {
        out += "\n[attractor." + at.name + "]\n";
        dump_kv(out, "position", vec_text(at.position));
        dump_kv(out, "radius", format_double(at.radius));
    }

    for (const TrafficLight& light : scn.lights) {
        out += "\n[light." + light.name + "]\n";
        dump_kv(out, "stop_line", vec_text(light.stop_a) + " " + vec_text(light.stop_b));
        std::string cyc;
        for (std::size_t i = 0; i < light.cycle.size(); ++i) {
            if (i) cyc += ", ";
            cyc += light.cycle[i].color == LightPhase::Color::green ? "green " : "red ";
            cyc += format_double(light.cycle[i].duration);
        }
        dump_kv(out, "cycle", cyc);
        dump_kv(out, "road", scn.roads[light.road].name);
        dump_kv(out, "approach", vec_text(light.approach));
    }

    for (const AgentSpec& spec : scn.agent_specs) {
        out += "\n[agents." + spec.name + "]\n";
        dump_kv(out, "kind", std::string(to_string(spec.kind)));
        dump_kv(out, "count", std::to_string(spec.count));
        dump_kv(out, "shape", shape_text(spec.shape));
        switch (spec.placement.mode) {
            case Placement::Mode::region:
                dump_kv(out, "placement", "region " + vec_text(spec.placement.rect_min) + " " +
                                              vec_text(spec.placement.rect_max));
                break;
            case Placement::Mode::roadside:
                dump_kv(out, "placement", "roadside " + scn.roads[spec.placement.road].name);
                break;
            case Placement::Mode::circle:
                dump_kv(out, "placement", "circle " + vec_text(spec.placement.center) + " " +
                                              format_double(spec.placement.radius));
                break;
        }
        switch (spec.goal.mode) {
            case Goal::Mode::point:
                dump_kv(out, "goal", "point " + vec_text(spec.goal.point));
                break;
            case Goal::Mode::road_follow:
                dump_kv(out, "goal", "road_follow " + scn.roads[spec.goal.road_from].name);
                break;
            case Goal::Mode::opposite_side:
                dump_kv(out, "goal", "opposite_side");
                break;
            case Goal::Mode::crossing:
                dump_kv(out, "goal", "crossing " + scn.roads[spec.goal.road_from].name + " " +
                                         scn.roads[spec.goal.road_to].name);
                break;
        }
        if (spec.group_id >= 0) dump_kv(out, "group", std::to_string(spec.group_id));
        dump_kv(out, "overtake", spec.overtake == OvertakeClass::no_overtake ? "no" : "can");
    }
    return out;
}

// --- Control direction ---

Vec2 control_direction(const Scenario& scn, const AgentState& agent, Vec2 p, double /*t*/) {
    const Goal& goal = agent.goal;
    switch (goal.mode) {
        case Goal::Mode::point: {
            const Vec2 to = goal.point - p;
            if (norm(to) < kEps) return {0.0, 0.0};  // arrived
            return unit_vector(to);
        }
        case Goal::Mode::road_follow:
            return scn.roads[goal.road_from].project(p).tangent;
        case Goal::Mode::opposite_side:
            return goal.fixed_direction;
        case Goal::Mode::crossing: {
            if (agent.kind == AgentKind::pedestrian) {
                const Road& walkway = scn.roads[goal.road_from];
                if (!agent.crossing.active) return walkway.project(p).tangent;
                // Heading across the carriageway: perpendicular to the
                // walkway, signed toward the target side.
                const Vec2 t = walkway.project(p).tangent;
                Vec2 across = perp(t);
                const Vec2 target = scn.roads[goal.road_to].project(p).point;
                if (dot(across, target - p) < 0.0) across = -across;
                return across;
            }
            // Vehicles: blend the two road tangents by progress along the
            // chord from the source road's end to the target road's start.
            const Road& from = scn.roads[goal.road_from];
            const Road& to = scn.roads[goal.road_to];
            const Vec2 entry = from.centerline.back();
            const Vec2 exit = to.centerline.front();
            const Vec2 chord = exit - entry;
            const double len = norm(chord);
            if (len < kEps) return to.project(p).tangent;
            const double s = dot(p - entry, chord / len) / len;
            if (s <= 0.0) return from.project(p).tangent;
            if (s >= 1.0) return to.project(p).tangent;
            const Vec2 blend = from.end_tangent() * (1.0 - s) + to.start_tangent() * s;
            const Vec2 dir = unit_vector(blend);
            return norm(dir) < 0.5 ? unit_vector(chord) : dir;
        }
    }
    return {0.0, 0.0};
}

// --- Initialization ---

std::vector<AgentState> initialize_agents(const Scenario& scn, const GroupedDataset& dataset,
                                          std::uint64_t seed) {
    for (const AgentSpec& spec : scn.agent_specs) {
        scn.weights_for(spec.kind);
        if (!dataset.has_kind(spec.kind))
            throw ValidationError("agents." + spec.name + ": dataset has no states of kind '" +
                                  std::string(to_string(spec.kind)) + "'");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<AgentState> agents;
    int total = 0;
    for (const AgentSpec& spec : scn.agent_specs) total += spec.count;
    agents.reserve(total);

    for (std::size_t spec_idx = 0; spec_idx < scn.agent_specs.size(); ++spec_idx) {
        const AgentSpec& spec = scn.agent_specs[spec_idx];

        Goal goal = spec.goal;
        if (goal.mode == Goal::Mode::opposite_side) {
            const Vec2 center = placement_center(spec.placement, scn.roads);
            const Vec2 dir = unit_vector(scn.bounds_center() - center);
            if (norm(dir) < 0.5)
                throw ValidationError("agents." + spec.name +
                                      ": opposite_side goal needs an off-center placement");
            goal.fixed_direction = dir;
        }

        for (int i = 0; i < spec.count; ++i) {
            AgentState agent;
            agent.id = static_cast<std::uint32_t>(agents.size());
            agent.kind = spec.kind;
            agent.shape = spec.shape;
            agent.group_id = spec.group_id;
            agent.goal = goal;
            agent.overtake = spec.overtake;
            agent.spec_index = static_cast<int>(spec_idx);

            Vec2 placement_heading{1.0, 0.0};
            bool placed = false;
            for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
                Vec2 p;
                switch (spec.placement.mode) {
                    case Placement::Mode::region: {
                        const Vec2 lo = spec.placement.rect_min;
                        const Vec2 hi = spec.placement.rect_max;
                        p = {lo.x + (hi.x - lo.x) * u01(rng), lo.y + (hi.y - lo.y) * u01(rng)};
                        break;
                    }
                    case Placement::Mode::circle: {
                        const double r = spec.placement.radius * std::sqrt(u01(rng));
                        const double a = 2.0 * M_PI * u01(rng);
                        p = spec.placement.center + Vec2{std::cos(a), std::sin(a)} * r;
                        break;
                    }
                    case Placement::Mode::roadside: {
                        const Road& road = scn.roads[spec.placement.road];
                        const double arc = road.total_length() * u01(rng);
                        const int lane =
                            std::min(static_cast<int>(u01(rng) * road.lane_count), road.lane_count - 1);
                        const Vec2 c = road.point_at(arc);
                        const Vec2 t = road.tangent_at(arc);
                        p = c + perp(t) * road.lane_center_offset(lane);
                        placement_heading = t;
                        break;
                    }
                }
                const Body candidate{p, {0.0, 0.0}, placement_heading, spec.shape};
                bool clear = true;
                for (const AgentState& other : agents)
                    if (predicted_distance(candidate, {0.0, 0.0}, other.body(), 0.0) <= 0.0) {
                        clear = false;
                        break;
                    }
                if (clear)
                    for (const Obstacle& ob : scn.obstacles)
                        if (predicted_distance(candidate, {0.0, 0.0}, ob.body, 0.0) <= 0.0) {
                            clear = false;
                            break;
                        }
                if (clear) {
                    agent.position = p;
                    agent.heading = placement_heading;
                    placed = true;
                }
            }
            if (!placed)
                throw ValidationError("agents." + spec.name + ": placement rejection budget exhausted; placed " +
                                      std::to_string(agents.size()) + " of " + std::to_string(total) +
                                      " agents");

            agent.control_direction = control_direction(scn, agent, agent.position, 0.0);

            const auto pool = dataset.kind_indices(spec.kind);
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            const EstimatedState& drawn = dataset.states()[pool[pick(rng)]];
            agent.velocity = adapt_velocity(drawn, agent.control_direction);
            if (norm(agent.velocity) >= kEps) agent.heading = unit_vector(agent.velocity);
            agent.speed_group = dataset.group_of_speed(norm(agent.velocity));
            const auto& w = scn.weights_for(spec.kind);
            agent.target_speed = w.target_speed ? *w.target_speed : norm(agent.velocity);
            agents.push_back(std::move(agent));
        }
    }
    return agents;
}

// --- Traffic light gate ---

std::optional<Body> light_gate(const Scenario& scn, const AgentState& agent, Vec2 p, Vec2 v,
                               double t) {
    const Goal& goal = agent.goal;
    for (const TrafficLight& light : scn.lights) {
        int current_road = -1;
        if (goal.mode == Goal::Mode::road_follow) {
            current_road = goal.road_from;
        } else if (goal.mode == Goal::Mode::crossing) {
            current_road = goal.road_from;
            if (agent.kind != AgentKind::pedestrian) {
                const Road& from = scn.roads[goal.road_from];
                const Vec2 entry = from.centerline.back();
                const Vec2 exit = scn.roads[goal.road_to].centerline.front();
                const Vec2 chord = exit - entry;
                const double len = norm(chord);
                if (len >= kEps && dot(p - entry, chord / len) / len >= 1.0)
                    current_road = goal.road_to;
            }
        }
        if (current_road != light.road) continue;
        if (light.phase_at(t) != LightPhase::Color::red) continue;

        // Intent test: moving or routed toward the line.
        if (dot(v, light.approach) <= 0.0 && dot(agent.control_direction, light.approach) <= 0.0)
            continue;
        const Vec2 mid = (light.stop_a + light.stop_b) * 0.5;
        const double along = dot(mid - p, light.approach);
        if (along < -0.5) continue;  // already past the line
        const double reach = norm(v) * scn.params.horizon() + scn.params.d_c;
        if (along > reach) continue;

        Body wall;
        wall.position = mid;
        wall.velocity = {0.0, 0.0};
        wall.heading = unit_vector(light.stop_b - light.stop_a);
        wall.shape = Rect{0.5 * distance(light.stop_a, light.stop_b), 0.3};
        return wall;
    }
    return std::nullopt;
}

}  // namespace agentsim
