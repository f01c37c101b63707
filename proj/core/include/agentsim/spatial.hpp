#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "agentsim/geometry.hpp"

namespace agentsim {

// Uniform 2D hash of body ids by cell, rebuilt from scratch each frame.
// Agents occupy exactly the cell containing their center; extended bodies
// (obstacles) may be inserted into every cell their bounding box overlaps.
class SpatialGrid {
public:
    SpatialGrid() = default;
    SpatialGrid(double cell_size, Vec2 origin);

    double cell_size() const { return cell_size_; }
    Vec2 origin() const { return origin_; }

    std::pair<int, int> cell_of(Vec2 p) const;

    void clear();
    void insert(std::uint32_t id, Vec2 p);
    // Covers every cell touched by the axis-aligned box [min, max].
    void insert_box(std::uint32_t id, Vec2 min, Vec2 max);

    // All ids in the 3x3 block of cells around `p`, excluding `self_id`,
    // cell-major (row by row) then insertion order. Ids inserted into
    // several cells appear once per covered cell; callers that need set
    // semantics deduplicate.
    void query_block(Vec2 p, std::uint32_t self_id, std::vector<std::uint32_t>& out) const;

    // Every stored id, once per insertion (multiset semantics).
    std::vector<std::uint32_t> all_ids() const;

    std::size_t cell_count() const { return cells_.size(); }
    std::span<const std::uint32_t> cell(int cx, int cy) const;

private:
    static std::uint64_t key(int cx, int cy);

    double cell_size_ = 10.0;
    Vec2 origin_{0.0, 0.0};
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

// Buckets each (id, position) pair into its cell.
SpatialGrid build_grid(std::span<const std::pair<std::uint32_t, Vec2>> positions, double cell_size,
                       Vec2 origin = {0.0, 0.0});

struct NeighborRef {
    std::uint32_t id = 0;
    const Body* body = nullptr;
};

// Members of the collision neighborhood: candidates whose predicted
// clearance from `self` (moving at candidate velocity v) after time t is
// strictly below d_c. Candidate order is preserved; membership itself is
// order-independent.
std::vector<NeighborRef> collision_neighborhood(const Body& self, Vec2 v, double t,
                                                std::span<const NeighborRef> candidates,
                                                double d_c);

// Members of the attraction neighborhood: candidates with
// d_a < clearance <= d_a_max.
std::vector<NeighborRef> attraction_neighborhood(const Body& self, Vec2 v, double t,
                                                 std::span<const NeighborRef> candidates,
                                                 double d_a, double d_a_max);

// Smallest cell size for which the 3x3 block query provably finds every
// collision or attraction member: threshold + both shape extents + the
// farthest either body can travel within the anticipation horizon.
double grid_equivalence_bound(double d_c, double d_a_max, double max_shape_radius,
                              double max_speed, double horizon);

}  // namespace agentsim
