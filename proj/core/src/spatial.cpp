#include "agentsim/spatial.hpp"

#include <algorithm>
#include <cmath>

#include "agentsim/error.hpp"

namespace agentsim {

SpatialGrid::SpatialGrid(double cell_size, Vec2 origin) : cell_size_(cell_size), origin_(origin) {
    if (!(cell_size > 0.0)) throw ValidationError("spatial grid: cell size must be > 0");
}

std::uint64_t SpatialGrid::key(int cx, int cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint32_t>(cy);
}

std::pair<int, int> SpatialGrid::cell_of(Vec2 p) const {
    return {static_cast<int>(std::floor((p.x - origin_.x) / cell_size_)),
            static_cast<int>(std::floor((p.y - origin_.y) / cell_size_))};
}

void SpatialGrid::clear() { cells_.clear(); }

void SpatialGrid::insert(std::uint32_t id, Vec2 p) {
    const auto [cx, cy] = cell_of(p);
    cells_[key(cx, cy)].push_back(id);
}

void SpatialGrid::insert_box(std::uint32_t id, Vec2 min, Vec2 max) {
    const auto [cx0, cy0] = cell_of(min);
    const auto [cx1, cy1] = cell_of(max);
    for (int cx = cx0; cx <= cx1; ++cx)
        for (int cy = cy0; cy <= cy1; ++cy) cells_[key(cx, cy)].push_back(id);
}

void SpatialGrid::query_block(Vec2 p, std::uint32_t self_id,
                              std::vector<std::uint32_t>& out) const {
    const auto [cx, cy] = cell_of(p);
    for (int kx = cx - 1; kx <= cx + 1; ++kx) {
        for (int ky = cy - 1; ky <= cy + 1; ++ky) {
            const auto it = cells_.find(key(kx, ky));
            if (it == cells_.end()) continue;
            for (const std::uint32_t id : it->second)
                if (id != self_id) out.push_back(id);
        }
    }
}

std::vector<std::uint32_t> SpatialGrid::all_ids() const {
    std::vector<std::uint32_t> out;
    for (const auto& [k, ids] : cells_) out.insert(out.end(), ids.begin(), ids.end());
    return out;
}

std::span<const std::uint32_t> SpatialGrid::cell(int cx, int cy) const {
    const auto it = cells_.find(key(cx, cy));
    if (it == cells_.end()) return {};
    return it->second;
}

SpatialGrid build_grid(std::span<const std::pair<std::uint32_t, Vec2>> positions,
                       double cell_size, Vec2 origin) {
    SpatialGrid grid(cell_size, origin);
    for (const auto& [id, p] : positions) grid.insert(id, p);
    return grid;
}

std::vector<NeighborRef> collision_neighborhood(const Body& self, Vec2 v, double t,
                                                std::span<const NeighborRef> candidates,
                                                double d_c) {
    std::vector<NeighborRef> members;
    for (const NeighborRef& c : candidates)
        if (predicted_distance(self, v, *c.body, t) < d_c) members.push_back(c);
    return members;
}

std::vector<NeighborRef> attraction_neighborhood(const Body& self, Vec2 v, double t,
                                                 std::span<const NeighborRef> candidates,
                                                 double d_a, double d_a_max) {
    std::vector<NeighborRef> members;
    for (const NeighborRef& c : candidates) {
        const double d = predicted_distance(self, v, *c.body, t);
        if (d > d_a && d <= d_a_max) members.push_back(c);
    }
    return members;
}

double grid_equivalence_bound(double d_c, double d_a_max, double max_shape_radius,
                              double max_speed, double horizon) {
    return std::max(d_c, d_a_max) + 2.0 * max_shape_radius + 2.0 * max_speed * horizon;
}

}  // namespace agentsim
