#pragma once

#include <variant>

#include "agentsim/vec2.hpp"

namespace agentsim {

struct Circle {
    double radius = 0.0;
};

// Oriented box: half_length extends along the owner's heading, half_width
// across it. Cars and other vehicles are rectangles, pedestrians circles.
struct Rect {
    double half_length = 0.0;
    double half_width = 0.0;
};

using Shape = std::variant<Circle, Rect>;

void validate_shape(const Shape& shape);

// Circumradius; used for grid-coverage bounds, never for clearance itself.
double max_radius(const Shape& shape);

// Extent of the shape along `dir`, measured from its center. For a circle
// this is the radius regardless of `dir`; for a rectangle it is the support
// distance of the oriented box: h(dir) = hl*|dir.heading| + hw*|dir.heading_perp|.
// A zero heading defaults to +x.
inline double directional_radius(const Shape& shape, Vec2 heading, Vec2 dir) {
    if (const Circle* c = std::get_if<Circle>(&shape)) return c->radius;
    const Rect& r = std::get<Rect>(shape);
    if (norm_sq(heading) < kEps * kEps) heading = {1.0, 0.0};
    return r.half_length * std::abs(dot(dir, heading)) +
           r.half_width * std::abs(dot(dir, perp(heading)));
}

// Anything occupying space in the scene: an agent, an obstacle, a virtual
// stop-line wall. Obstacles carry zero velocity.
struct Body {
    Vec2 position;
    Vec2 velocity;
    Vec2 heading{1.0, 0.0};
    Shape shape = Circle{0.25};
};

// Signed clearance between `self` (moving at the candidate velocity `v`) and
// `other` (moving at its current velocity) after time t, under constant
// velocities. The relative displacement is reduced to its norm before the
// directional radii are subtracted; negative values signal interpenetration.
inline double predicted_distance(const Body& self, Vec2 v, const Body& other, double t) {
    const Vec2 r = (self.position + v * t) - (other.position + other.velocity * t);
    const double len = norm(r);
    Vec2 n;
    if (len < kEps) {
        // Coincident predicted centers: measure the overlap along the
        // deciding agent's heading so rectangles still report penetration.
        n = norm_sq(self.heading) < kEps * kEps ? Vec2{1.0, 0.0} : unit_vector(self.heading);
    } else {
        n = r / len;
    }
    return len - directional_radius(self.shape, self.heading, -n) -
           directional_radius(other.shape, other.heading, n);
}

}  // namespace agentsim
