#include <doctest.h>

#include <random>

#include "npin/grid.hpp"
#include "oracles.hpp"

using namespace npin;


TEST_CASE("grid cell/world conversion") {
    OccupancyGrid g(10, 5, 0.1, {1.0, 2.0});
    const Cell c = g.cell_at({1.25, 2.31});
    CHECK(c == Cell{2, 3});
    CHECK(g.center(c).x == doctest::Approx(1.25));
    CHECK(g.center(c).y == doctest::Approx(2.35));
    CHECK_FALSE(g.contains(Cell{10, 0}));
    CHECK_THROWS(g.at(Cell{-1, 0}));
}

TEST_CASE("DT on an empty grid is the octile distance") {
    OccupancyGrid g(21, 15, 0.1);
    const std::vector<Cell> src{{4, 6}};
    const DistanceGrid d = distance_transform(g, src);
    CHECK(d[Cell{4, 6}] == 0.0);
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) {
            const int dx = std::abs(x - 4), dy = std::abs(y - 6);
            const double octile = 0.1 * (std::max(dx, dy) - std::min(dx, dy) + std::sqrt(2.0) * std::min(dx, dy));
            CHECK(d[Cell{x, y}] == doctest::Approx(octile).epsilon(1e-12));
        }
    }
}

TEST_CASE("DT routes around a wall and marks enclosed cells unreachable") {
    OccupancyGrid g(20, 20, 0.1);
    for (int y = 0; y < 18; ++y) g[Cell{10, y}] = 1;
    // sealed pocket
    for (int i = 2; i <= 4; ++i) {
        g[Cell{i, 14}] = g[Cell{i, 18}] = g[Cell{2, 14 + i - 1}] = g[Cell{4, 14 + i - 1}] = 1;
    }
    g[Cell{3, 17}] = 1;
    const std::vector<Cell> src{{15, 2}};
    const DistanceGrid d = distance_transform(g, src);
    CHECK(d[Cell{3, 15}] == kUnreachable);
    CHECK(d[Cell{10, 5}] == kUnreachable);  // obstacle
    CHECK(d[Cell{5, 2}] > 3.0);  // must detour over the wall top
    const DistanceGrid o = oracle::relaxation_dt(g, src);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.data()[i] == doctest::Approx(o.data()[i]).epsilon(1e-12));
}

TEST_CASE("DT equals the relaxation oracle on 50 random maps") {
    std::mt19937 gen(2024);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> dim(8, 30);
        OccupancyGrid g(dim(gen), dim(gen), 0.1);
        std::bernoulli_distribution wall(0.25);
        for (auto& v : g.data()) v = wall(gen) ? 1 : 0;
        std::vector<Cell> src;
        std::uniform_int_distribution<int> sx(0, g.width() - 1), sy(0, g.height() - 1);
        const int n = 1 + trial % 3;
        for (int k = 0; k < n; ++k) {
            const Cell c{sx(gen), sy(gen)};
            g[c] = 0;
            src.push_back(c);
        }
        const DistanceGrid d = distance_transform(g, src);
        const DistanceGrid o = oracle::relaxation_dt(g, src);
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (o.data()[i] == kUnreachable) {
                CHECK(d.data()[i] == kUnreachable);
            } else {
                CHECK(std::abs(d.data()[i] - o.data()[i]) < 1e-9);
            }
        }
    }
}

TEST_CASE("DT rejects an empty source set") {
    OccupancyGrid g(4, 4, 0.1);
    CHECK_THROWS_AS(distance_transform(g, std::vector<Cell>{}), std::invalid_argument);
}

TEST_CASE("rasterized area matches the polygon area within a perimeter band") {
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> u(0.3, 2.0), ang(0.0, 6.28);
    for (int i = 0; i < 30; ++i) {
        OccupancyGrid g(80, 80, 0.1);
        const double l = u(gen), w = u(gen), th = ang(gen);
        const Pose p{4.0, 4.0, th};
        std::vector<Vec2> poly;
        for (const Vec2 v : std::vector<Vec2>{{-l / 2, -w / 2}, {l / 2, -w / 2}, {l / 2, w / 2}, {-l / 2, w / 2}}) {
            poly.push_back(p.to_world(v));
        }
        rasterize_polygon(g, poly);
        double cells = 0;
        for (auto v : g.data()) cells += v;
        const double area = l * w;
        const double perimeter = 2 * (l + w);
        CHECK(std::abs(cells * 0.01 - area) <= perimeter * 0.1);
    }
}

TEST_CASE("inflation grows obstacles by the radius") {
    OccupancyGrid g(21, 21, 0.1);
    g[Cell{10, 10}] = 1;
    const OccupancyGrid f = inflate(g, 0.25);
    CHECK(f[Cell{12, 10}] == 1);
    CHECK(f[Cell{10, 12}] == 1);
    CHECK(f[Cell{12, 11}] == 1);   // hypot(2,1)=2.24 cells
    CHECK(f[Cell{12, 12}] == 0);   // hypot(2,2)=2.83 cells
    CHECK(f[Cell{13, 10}] == 0);
}
