#include "agentsim/geometry.hpp"

#include <cmath>

#include "agentsim/error.hpp"

namespace agentsim {

void validate_shape(const Shape& shape) {
    if (const Circle* c = std::get_if<Circle>(&shape)) {
        if (!(c->radius > 0.0) || !std::isfinite(c->radius))
            throw ValidationError("shape: circle radius must be > 0");
        return;
    }
    const Rect& r = std::get<Rect>(shape);
    if (!(r.half_length > 0.0) || !(r.half_width > 0.0) ||
        !std::isfinite(r.half_length) || !std::isfinite(r.half_width))
        throw ValidationError("shape: rect half extents must be > 0");
}

double max_radius(const Shape& shape) {
    if (const Circle* c = std::get_if<Circle>(&shape)) return c->radius;
    const Rect& r = std::get<Rect>(shape);
    return std::sqrt(r.half_length * r.half_length + r.half_width * r.half_width);
}

}  // namespace agentsim
