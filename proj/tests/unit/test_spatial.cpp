#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "agentsim/error.hpp"
#include "agentsim/spatial.hpp"

using namespace agentsim;

TEST_CASE("cell bucketing uses floor division") {
    SpatialGrid grid(10.0, {0.0, 0.0});
    CHECK(grid.cell_of({12.3, 47.9}) == std::pair<int, int>{1, 4});
    CHECK(grid.cell_of({-0.1, 0.0}) == std::pair<int, int>{-1, 0});
    CHECK(grid.cell_of({0.0, 0.0}) == std::pair<int, int>{0, 0});
}

TEST_CASE("build_grid buckets every id; flatten recovers the multiset") {
    std::vector<std::pair<std::uint32_t, Vec2>> positions = {
        {0, {1.0, 1.0}}, {1, {2.0, 2.0}}, {2, {55.0, 3.0}}, {3, {-1.0, -1.0}}, {4, {1.5, 1.5}}};
    const SpatialGrid grid = build_grid(positions, 10.0);
    auto ids = grid.all_ids();
    std::sort(ids.begin(), ids.end());
    CHECK(ids == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
    // agents 0, 1, 4 share cell (0,0)
    CHECK(grid.cell(0, 0).size() == 3);
}

TEST_CASE("query_block returns the 3x3 block without self") {
    std::vector<std::pair<std::uint32_t, Vec2>> positions = {
        {0, {15.0, 15.0}},   // center cell (1,1)
        {1, {21.0, 21.0}},   // diagonal cell (2,2) -> included
        {2, {15.5, 16.5}},   // same cell
        {3, {45.0, 15.0}},   // cell (4,1), two cells away -> excluded
    };
    const SpatialGrid grid = build_grid(positions, 10.0);
    std::vector<std::uint32_t> out;
    grid.query_block({15.0, 15.0}, 0, out);
    std::sort(out.begin(), out.end());
    CHECK(out == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("single agent has no candidates") {
    std::vector<std::pair<std::uint32_t, Vec2>> positions = {{0, {5.0, 5.0}}};
    const SpatialGrid grid = build_grid(positions, 10.0);
    std::vector<std::uint32_t> out;
    grid.query_block({5.0, 5.0}, 0, out);
    CHECK(out.empty());
}

namespace {

std::vector<NeighborRef> make_refs(const std::vector<Body>& bodies) {
    std::vector<NeighborRef> refs;
    for (std::size_t i = 0; i < bodies.size(); ++i)
        refs.push_back({static_cast<std::uint32_t>(i), &bodies[i]});
    return refs;
}

}  // namespace

TEST_CASE("collision_neighborhood threshold is strict") {
    const Body self{{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, Circle{0.5}};
    const double d_c = 2.0;

    SUBCASE("nothing within reach") {
        std::vector<Body> far = {{{100.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, Circle{0.5}}};
        CHECK(collision_neighborhood(self, {1.0, 0.0}, 0.1, make_refs(far), d_c).empty());
    }
    SUBCASE("clearance just below d_c is included") {
        std::vector<Body> q = {{{d_c - 0.1 + 1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, Circle{0.5}}};
        CHECK(collision_neighborhood(self, {0.0, 0.0}, 1.0, make_refs(q), d_c).size() == 1);
    }
    SUBCASE("clearance exactly d_c is excluded") {
        std::vector<Body> q = {{{d_c + 1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, Circle{0.5}}};
        CHECK(collision_neighborhood(self, {0.0, 0.0}, 1.0, make_refs(q), d_c).empty());
    }
    SUBCASE("static obstacle straight ahead enters at the horizon") {
        // clearance d_c - 0.1 after t: obstacle at rest, self moving
        std::vector<Body> q = {{{3.0 + 1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, Circle{0.5}}};
        const auto members =
            collision_neighborhood(self, {(3.0 - (d_c - 0.1)) / 1.0, 0.0}, 1.0, make_refs(q), d_c);
        CHECK(members.size() == 1);
    }
}

TEST_CASE("attraction_neighborhood band semantics") {
    const Body self{{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, Circle{0.5}};
    const double d_a = 2.0, d_a_max = 6.0;

    SUBCASE("lone agent, no attractors") {
        CHECK(attraction_neighborhood(self, {0.0, 0.0}, 0.1, {}, d_a, d_a_max).empty());
    }
    SUBCASE("interior of the band is included") {
        const double mid = 0.5 * (d_a + d_a_max);
        std::vector<Body> q = {{{mid + 1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, Circle{0.5}}};
        CHECK(attraction_neighborhood(self, {0.0, 0.0}, 0.0, make_refs(q), d_a, d_a_max).size() == 1);
    }
    SUBCASE("too close to attract") {
        std::vector<Body> q = {{{0.5 * d_a + 1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, Circle{0.5}}};
        CHECK(attraction_neighborhood(self, {0.0, 0.0}, 0.0, make_refs(q), d_a, d_a_max).empty());
    }
    SUBCASE("beyond the cap is excluded") {
        std::vector<Body> q = {{{d_a_max + 1.0 + 0.5, 0.0}, {0.0, 0.0}, {1.0, 0.0}, Circle{0.5}}};
        CHECK(attraction_neighborhood(self, {0.0, 0.0}, 0.0, make_refs(q), d_a, d_a_max).empty());
    }
}

TEST_CASE("membership is invariant to candidate order") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> coord(-20.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Body> bodies;
        for (int i = 0; i < 30; ++i)
            bodies.push_back({{coord(rng), coord(rng)},
                              {coord(rng) * 0.05, coord(rng) * 0.05},
                              {1.0, 0.0},
                              Circle{0.4}});
        const Body self{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, Circle{0.4}};
        auto refs = make_refs(bodies);
        const auto forward = collision_neighborhood(self, {1.0, 0.0}, 1.0, refs, 3.0);
        std::reverse(refs.begin(), refs.end());
        auto backward = collision_neighborhood(self, {1.0, 0.0}, 1.0, refs, 3.0);
        std::vector<std::uint32_t> a, b;
        for (const auto& m : forward) a.push_back(m.id);
        for (const auto& m : backward) b.push_back(m.id);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
}

TEST_CASE("grid neighborhoods equal the all-pairs scan under the size condition") {
    std::mt19937_64 rng(2024);
    const double d_c = 2.0, d_a = 2.0, d_a_max = 6.0;
    const double max_r = 0.5, max_speed = 2.0, horizon = 1.0;
    const double h = grid_equivalence_bound(d_c, d_a_max, max_r, max_speed, horizon);

    for (int scene = 0; scene < 5; ++scene) {
        std::uniform_real_distribution<double> coord(0.0, 120.0);
        std::uniform_real_distribution<double> vel(-max_speed, max_speed);
        std::uniform_real_distribution<double> rad(0.2, max_r);
        const int n = 500;
        std::vector<Body> bodies;
        std::vector<std::pair<std::uint32_t, Vec2>> positions;
        for (int i = 0; i < n; ++i) {
            Body b;
            b.position = {coord(rng), coord(rng)};
            Vec2 v{vel(rng), vel(rng)};
            if (norm(v) > max_speed) v = unit_vector(v) * max_speed;
            b.velocity = v;
            b.heading = norm(v) >= kEps ? unit_vector(v) : Vec2{1.0, 0.0};
            b.shape = Circle{rad(rng)};
            bodies.push_back(b);
            positions.push_back({static_cast<std::uint32_t>(i), b.position});
        }
        const SpatialGrid grid = build_grid(positions, h);

        for (int i = 0; i < n; i += 17) {
            const Body& self = bodies[i];
            const Vec2 v = self.velocity;

            std::vector<std::uint32_t> cand_ids;
            grid.query_block(self.position, static_cast<std::uint32_t>(i), cand_ids);
            std::vector<NeighborRef> grid_refs, all_refs;
            for (const std::uint32_t j : cand_ids) grid_refs.push_back({j, &bodies[j]});
            for (int j = 0; j < n; ++j)
                if (j != i) all_refs.push_back({static_cast<std::uint32_t>(j), &bodies[j]});

            for (const double t : {0.1, horizon}) {
                auto a = collision_neighborhood(self, v, t, grid_refs, d_c);
                auto b = collision_neighborhood(self, v, t, all_refs, d_c);
                std::vector<std::uint32_t> ia, ib;
                for (const auto& m : a) ia.push_back(m.id);
                for (const auto& m : b) ib.push_back(m.id);
                std::sort(ia.begin(), ia.end());
                std::sort(ib.begin(), ib.end());
                CHECK(ia == ib);
            }
            {
                auto a = attraction_neighborhood(self, v, 0.1, grid_refs, d_a, d_a_max);
                auto b = attraction_neighborhood(self, v, 0.1, all_refs, d_a, d_a_max);
                std::vector<std::uint32_t> ia, ib;
                for (const auto& m : a) ia.push_back(m.id);
                for (const auto& m : b) ib.push_back(m.id);
                std::sort(ia.begin(), ia.end());
                std::sort(ib.begin(), ib.end());
                CHECK(ia == ib);
            }
        }
    }
}

TEST_CASE("insert_box covers all touched cells") {
    SpatialGrid grid(10.0, {0.0, 0.0});
    grid.insert_box(7, {8.0, 8.0}, {22.0, 12.0});  // spans cells x 0..2, y 0..1
    std::vector<std::uint32_t> out;
    grid.query_block({35.0, 5.0}, 1000, out);  // centered at cell (3,0); block covers 2..4
    // listed once per covered cell: (2,0) and (2,1)
    CHECK(out == std::vector<std::uint32_t>{7, 7});
    out.erase(std::unique(out.begin(), out.end()), out.end());
    CHECK(out == std::vector<std::uint32_t>{7});
    out.clear();
    grid.query_block({55.0, 5.0}, 1000, out);  // block covers 4..6, no overlap
    CHECK(out.empty());
}

TEST_CASE("grid rejects nonpositive cell size") {
    CHECK_THROWS_AS(SpatialGrid(0.0, {0.0, 0.0}), ValidationError);
}
