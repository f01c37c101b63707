#include "agentsim/render.hpp"

#include <cmath>
#include <cstdio>

namespace agentsim {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

const char* kind_color(AgentKind kind) {
    switch (kind) {
        case AgentKind::pedestrian: return "#2b6cb0";
        case AgentKind::car: return "#c53030";
        case AgentKind::bicycle: return "#2f855a";
        case AgentKind::tricycle: return "#805ad5";
        case AgentKind::other: return "#718096";
    }
    return "#718096";
}

void draw_body(std::string& out, const Body& body, const char* fill, double opacity) {
    if (const Circle* c = std::get_if<Circle>(&body.shape)) {
        out += "  <circle cx=\"" + num(body.position.x) + "\" cy=\"" + num(body.position.y) +
               "\" r=\"" + num(c->radius) + "\" fill=\"" + fill + "\" fill-opacity=\"" +
               num(opacity) + "\"/>\n";
        return;
    }
    const Rect& r = std::get<Rect>(body.shape);
    const double angle = std::atan2(body.heading.y, body.heading.x) * 180.0 / M_PI;
    out += "  <rect x=\"" + num(-r.half_length) + "\" y=\"" + num(-r.half_width) + "\" width=\"" +
           num(2.0 * r.half_length) + "\" height=\"" + num(2.0 * r.half_width) + "\" fill=\"" +
           fill + "\" fill-opacity=\"" + num(opacity) + "\" transform=\"translate(" +
           num(body.position.x) + " " + num(body.position.y) + ") rotate(" + num(angle) +
           ")\"/>\n";
}

}  // namespace

std::string render_svg(const Scenario& scn, const std::vector<AgentState>& agents, double time) {
    const double pad = 2.0;
    const Vec2 lo = scn.params.bounds_min - Vec2{pad, pad};
    const Vec2 hi = scn.params.bounds_max + Vec2{pad, pad};
    const double w = hi.x - lo.x;
    const double h = hi.y - lo.y;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(lo.x) + " " + num(lo.y) +
           " " + num(w) + " " + num(h) + "\" width=\"900\" height=\"" + num(900.0 * h / w) +
           "\">\n";
    // world y points up; flip around the vertical center of the viewBox
    out += "<g transform=\"matrix(1 0 0 -1 0 " + num(lo.y + hi.y) + ")\">\n";
    out += "  <rect x=\"" + num(lo.x) + "\" y=\"" + num(lo.y) + "\" width=\"" + num(w) +
           "\" height=\"" + num(h) + "\" fill=\"#f7fafc\"/>\n";
    out += "  <rect x=\"" + num(scn.params.bounds_min.x) + "\" y=\"" + num(scn.params.bounds_min.y) +
           "\" width=\"" + num(scn.params.bounds_max.x - scn.params.bounds_min.x) + "\" height=\"" +
           num(scn.params.bounds_max.y - scn.params.bounds_min.y) +
           "\" fill=\"none\" stroke=\"#cbd5e0\" stroke-width=\"0.2\"/>\n";

    for (const Road& road : scn.roads) {
        std::string pts;
        for (std::size_t i = 0; i < road.centerline.size(); ++i) {
            if (i) pts += " ";
            pts += num(road.centerline[i].x) + "," + num(road.centerline[i].y);
        }
        out += "  <polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#a0aec0\" stroke-width=\"" +
               num(2.0 * road.half_width()) + "\" stroke-linecap=\"butt\"/>\n";
        out += "  <polyline points=\"" + pts +
               "\" fill=\"none\" stroke=\"#ffffff\" stroke-width=\"0.15\" stroke-dasharray=\"1.5 1.5\"/>\n";
    }

    for (const Obstacle& ob : scn.obstacles) draw_body(out, ob.body, "#4a5568", 1.0);

    for (const Attractor& at : scn.attractors)
        out += "  <circle cx=\"" + num(at.position.x) + "\" cy=\"" + num(at.position.y) +
               "\" r=\"" + num(at.radius) +
               "\" fill=\"none\" stroke=\"#dd6b20\" stroke-width=\"0.15\"/>\n";

    for (const TrafficLight& light : scn.lights) {
        const bool red = light.phase_at(time) == LightPhase::Color::red;
        out += "  <line x1=\"" + num(light.stop_a.x) + "\" y1=\"" + num(light.stop_a.y) +
               "\" x2=\"" + num(light.stop_b.x) + "\" y2=\"" + num(light.stop_b.y) +
               "\" stroke=\"" + (red ? "#e53e3e" : "#38a169") + "\" stroke-width=\"0.4\"/>\n";
    }

    for (const AgentState& a : agents) draw_body(out, a.body(), kind_color(a.kind), 0.9);

    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace agentsim
