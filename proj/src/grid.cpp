#include "npin/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>

namespace npin {

void rasterize_polygon(OccupancyGrid& grid, std::span<const Vec2> polygon, std::uint8_t value) {
    const Aabb box = bounds_of(polygon);
    const Cell lo = grid.cell_at(box.lo);
    const Cell hi = grid.cell_at(box.hi);
    for (int y = std::max(lo.y, 0); y <= std::min(hi.y, grid.height() - 1); ++y) {
        for (int x = std::max(lo.x, 0); x <= std::min(hi.x, grid.width() - 1); ++x) {
            const Cell c{x, y};
            if (point_in_convex(polygon, grid.center(c))) {
                grid[c] = value;
            }
        }
    }
}

OccupancyGrid inflate(const OccupancyGrid& grid, double radius) {
    if (radius <= 0.0) {
        return grid;
    }
    const int r = static_cast<int>(std::ceil(radius / grid.resolution()));
    std::vector<Cell> offsets;
    const double r2 = radius * radius / (grid.resolution() * grid.resolution()) + 1e-9;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            if (dx * dx + dy * dy <= r2) offsets.push_back({dx, dy});
        }
    }
    OccupancyGrid out = grid;
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            if (!grid[Cell{x, y}]) continue;
            for (const Cell& o : offsets) {
                const Cell c{x + o.x, y + o.y};
                if (out.contains(c)) out[c] = 1;
            }
        }
    }
    return out;
}

DistanceGrid distance_transform(const OccupancyGrid& occupancy, std::span<const Cell> sources) {
    if (sources.empty()) {
        throw std::invalid_argument("distance_transform: source set is empty");
    }
    DistanceGrid dist(occupancy.width(), occupancy.height(), occupancy.resolution(), occupancy.origin(),
                      kUnreachable);
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    for (const Cell& s : sources) {
        if (!occupancy.contains(s)) continue;
        const std::size_t i = dist.index(s);
        dist.data()[i] = 0.0;
        open.push({0.0, i});
    }
    const double straight = occupancy.resolution();
    const double diagonal = std::numbers::sqrt2 * occupancy.resolution();
    constexpr int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    constexpr int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const auto free = [&](Cell c) { return occupancy.contains(c) && occupancy[c] == 0; };

    while (!open.empty()) {
        const auto [d, i] = open.top();
        open.pop();
        if (d > dist.data()[i]) continue;
        const Cell c = dist.cell_of_index(i);
        for (int k = 0; k < 8; ++k) {
            const Cell n{c.x + dxs[k], c.y + dys[k]};
            if (!free(n)) continue;
            const bool diag = k >= 4;
            if (diag && (!free(Cell{c.x + dxs[k], c.y}) || !free(Cell{c.x, c.y + dys[k]}))) continue;
            const double nd = d + (diag ? diagonal : straight);
            const std::size_t ni = dist.index(n);
            if (nd < dist.data()[ni]) {
                dist.data()[ni] = nd;
                open.push({nd, ni});
            }
        }
    }
    return dist;
}

}  // namespace npin
