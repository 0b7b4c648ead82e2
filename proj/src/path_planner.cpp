#include "npin/path_planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>

namespace npin {

StaticPathPlanner::StaticPathPlanner(const OccupancyGrid& static_map, double inflation_radius)
    : inflated_(inflate(static_map, inflation_radius)), radius_(inflation_radius) {}

bool StaticPathPlanner::line_of_sight(Vec2 a, Vec2 b) const {
    const double res = inflated_.resolution();
    const Vec2 o = inflated_.origin();
    // Work in cell units.
    const double ax = (a.x - o.x) / res, ay = (a.y - o.y) / res;
    const double bx = (b.x - o.x) / res, by = (b.y - o.y) / res;
    Cell c{static_cast<int>(std::floor(ax)), static_cast<int>(std::floor(ay))};
    const Cell end{static_cast<int>(std::floor(bx)), static_cast<int>(std::floor(by))};
    const double dx = bx - ax, dy = by - ay;
    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();
    double t_max_x = step_x > 0 ? (c.x + 1 - ax) / dx : (step_x < 0 ? (ax - c.x) / -dx : inf);
    double t_max_y = step_y > 0 ? (c.y + 1 - ay) / dy : (step_y < 0 ? (ay - c.y) / -dy : inf);
    const double t_delta_x = step_x != 0 ? 1.0 / std::abs(dx) : inf;
    const double t_delta_y = step_y != 0 ? 1.0 / std::abs(dy) : inf;

    const int limit = std::abs(end.x - c.x) + std::abs(end.y - c.y) + 4;
    for (int i = 0; i <= limit; ++i) {
        if (blocked(c)) return false;
        // The segment ends inside the current cell.
        if (c == end || std::min(t_max_x, t_max_y) > 1.0) return true;
        constexpr double eps = 1e-12;
        if (std::abs(t_max_x - t_max_y) < eps) {
            // Passing exactly through a corner touches both side cells.
            if (blocked(Cell{c.x + step_x, c.y}) || blocked(Cell{c.x, c.y + step_y})) return false;
            c.x += step_x;
            c.y += step_y;
            t_max_x += t_delta_x;
            t_max_y += t_delta_y;
        } else if (t_max_x < t_max_y) {
            c.x += step_x;
            t_max_x += t_delta_x;
        } else {
            c.y += step_y;
            t_max_y += t_delta_y;
        }
    }
    return !blocked(end);
}

bool StaticPathPlanner::snap_to_free(Cell from, Cell& out) const {
    const int max_cells = static_cast<int>(std::ceil(kMaxSnap / inflated_.resolution()));
    double best = std::numeric_limits<double>::infinity();
    for (int dy = -max_cells; dy <= max_cells; ++dy) {
        for (int dx = -max_cells; dx <= max_cells; ++dx) {
            const Cell c{from.x + dx, from.y + dy};
            if (blocked(c)) continue;
            const double d = std::hypot(dx, dy);
            if (d < best) {
                best = d;
                out = c;
            }
        }
    }
    return best * inflated_.resolution() <= kMaxSnap;
}

StaticPath StaticPathPlanner::plan(Vec2 start, const GoalRegion& goal) const {
    StaticPath path;
    if (goal.contains(start)) {
        path.waypoints = {start};
        return path;
    }
    const Vec2 direct = goal.nearest_point(start);
    if (line_of_sight(start, direct)) {
        path.length = distance(start, direct);
        path.waypoints = {start, direct};
        return path;
    }

    Cell s = inflated_.cell_at(start);
    Vec2 anchor = start;
    path.waypoints.push_back(start);
    if (blocked(s)) {
        Cell snapped{};
        if (!snap_to_free(s, snapped)) {
            throw UnreachableError("start point is inside inflated static geometry");
        }
        s = snapped;
        anchor = inflated_.center(s);
        path.waypoints.push_back(anchor);
    }

    const double res = inflated_.resolution();
    const double goal_tol = res * std::numbers::sqrt2 * 0.5;
    const auto is_goal = [&](Cell c) { return goal.distance(inflated_.center(c)) <= goal_tol; };

    std::vector<double> dist(inflated_.size(), std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(inflated_.size(), std::numeric_limits<std::size_t>::max());
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    const std::size_t si = inflated_.index(s);
    dist[si] = 0.0;
    open.push({0.0, si});
    constexpr int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    constexpr int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    std::size_t reached = std::numeric_limits<std::size_t>::max();
    while (!open.empty()) {
        const auto [d, i] = open.top();
        open.pop();
        if (d > dist[i]) continue;
        const Cell c = inflated_.cell_of_index(i);
        if (is_goal(c)) {
            reached = i;
            break;
        }
        for (int k = 0; k < 8; ++k) {
            const Cell n{c.x + dxs[k], c.y + dys[k]};
            if (blocked(n)) continue;
            const bool diag = k >= 4;
            if (diag && (blocked(Cell{c.x + dxs[k], c.y}) || blocked(Cell{c.x, c.y + dys[k]}))) continue;
            const double nd = d + (diag ? std::numbers::sqrt2 * res : res);
            const std::size_t ni = inflated_.index(n);
            if (nd < dist[ni]) {
                dist[ni] = nd;
                parent[ni] = i;
                open.push({nd, ni});
            }
        }
    }
    if (reached == std::numeric_limits<std::size_t>::max()) {
        throw UnreachableError("goal region is unreachable through static geometry");
    }

    std::vector<Vec2> chain;
    for (std::size_t i = reached; i != std::numeric_limits<std::size_t>::max(); i = parent[i]) {
        chain.push_back(inflated_.center(inflated_.cell_of_index(i)));
    }
    std::reverse(chain.begin(), chain.end());

    std::size_t cur = 0;  // chain index already reached (anchor sits at or before it)
    const std::size_t first_free = path.waypoints.size() - 1;  // waypoints before this stay fixed
    while (true) {
        const Vec2 target = goal.nearest_point(anchor);
        if (line_of_sight(anchor, target)) {
            path.waypoints.push_back(target);
            break;
        }
        if (cur + 1 >= chain.size()) {
            // Anchor is the final goal cell centre.
            if (goal.distance(anchor) > 0.0) path.waypoints.push_back(goal.nearest_point(anchor));
            break;
        }
        std::size_t best = cur + 1;
        for (std::size_t k = cur + 1; k < chain.size(); ++k) {
            if (line_of_sight(anchor, chain[k])) {
                best = k;
            } else if (k > best + 2) {
                break;
            }
        }
        anchor = chain[best];
        path.waypoints.push_back(anchor);
        cur = best;
    }
    refine(path.waypoints, first_free);
    for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
        path.length += distance(path.waypoints[i - 1], path.waypoints[i]);
    }
    return path;
}

void StaticPathPlanner::refine(std::vector<Vec2>& pts, std::size_t first_free) const {
    // Cell-centre corners sit up to half a cell away from the obstacle corner the
    // true shortest path wraps; slide each interior corner within its own cell.
    const double h = 0.5 * inflated_.resolution() * (1.0 - 1e-6);
    const Vec2 offsets[8] = {{h, h}, {-h, h}, {h, -h}, {-h, -h}, {h, 0}, {-h, 0}, {0, h}, {0, -h}};
    for (int pass = 0; pass < 4; ++pass) {
        bool changed = false;
        for (std::size_t i = first_free + 1; i + 1 < pts.size(); ++i) {
            const Vec2 a = pts[i - 1], b = pts[i + 1];
            if (line_of_sight(a, b)) {
                pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
                --i;
                changed = true;
                continue;
            }
            const Vec2 centre = inflated_.center(inflated_.cell_at(pts[i]));
            double best = distance(a, pts[i]) + distance(pts[i], b);
            for (const Vec2& o : offsets) {
                const Vec2 c = centre + o;
                const double len = distance(a, c) + distance(c, b);
                if (len < best - 1e-12 && line_of_sight(a, c) && line_of_sight(c, b)) {
                    best = len;
                    pts[i] = c;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
}

double StaticPathPlanner::point_distance(Vec2 a, Vec2 b) const {
    if (line_of_sight(a, b)) {
        return distance(a, b);
    }
    Vec2 target = b;
    double extra = 0.0;
    const Cell bc = inflated_.cell_at(b);
    if (blocked(bc)) {
        Cell snapped{};
        if (!snap_to_free(bc, snapped)) {
            throw UnreachableError("target point is inside inflated static geometry");
        }
        target = inflated_.center(snapped);
        extra = distance(b, target);
    }
    return plan(a, GoalRegion(GoalDisk{target, 0.0})).length + extra;
}

double shortest_static_path(Vec2 start, const GoalRegion& goal, const OccupancyGrid& static_map,
                            double inflation_radius) {
    return StaticPathPlanner(static_map, inflation_radius).shortest_distance(start, goal);
}

}  // namespace npin
