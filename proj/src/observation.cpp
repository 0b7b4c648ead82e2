#include "npin/observation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "npin/path_planner.hpp"

namespace npin {

const ChannelGrid& Observation::channel(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return channels[i];
    }
    throw std::out_of_range("observation has no channel named " + name);
}

Vec2 WindowFrame::cell_center(int row, int col) const {
    const double f = (0.5 * height - 0.5 - row) * resolution;
    const double l = (0.5 * width - 0.5 - col) * resolution;
    const Vec2 fwd = unit_from_angle(angle);
    return center + fwd * f + perp(fwd) * l;
}

Vec2 WindowFrame::to_pixel(Vec2 world) const {
    const Vec2 fwd = unit_from_angle(angle);
    const Vec2 d = world - center;
    return {0.5 * width - dot(d, perp(fwd)) / resolution, 0.5 * height - dot(d, fwd) / resolution};
}

WindowFrame observation_frame(const EnvConfig& config, const Pose& robot) {
    // A heading line in a heading-aligned window would never change, so the
    // ship's window stays north-up.
    const double angle = config.kind == EnvKind::ship_ice ? std::numbers::pi / 2.0 : robot.theta;
    return WindowFrame{robot.position(), angle, config.window, config.window, config.resolution};
}

double sample_distance(const DistanceGrid& dt, Vec2 p, bool inside_goal) {
    if (inside_goal) return 0.0;
    const Cell c = dt.cell_at(p);
    double best = kUnreachable;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const Cell n{c.x + dx, c.y + dy};
            if (!dt.contains(n) || dt[n] == kUnreachable) continue;
            best = std::min(best, dt[n] + distance(p, dt.center(n)));
        }
    }
    return best;
}

DistanceGrid goal_distance_transform(const OccupancyGrid& static_map, const GoalRegion& goal, double clearance) {
    const OccupancyGrid occ = inflate(static_map, clearance);
    std::vector<Cell> sources, blocked_sources;
    for (int y = 0; y < occ.height(); ++y) {
        for (int x = 0; x < occ.width(); ++x) {
            const Cell c{x, y};
            if (!goal.contains(occ.center(c))) continue;
            (occ[c] ? blocked_sources : sources).push_back(c);
        }
    }
    if (sources.empty()) sources = std::move(blocked_sources);
    if (sources.empty()) throw UnreachableError("goal region covers no cell of the static map");
    return distance_transform(occ, sources);
}

void rasterize_window(ChannelGrid& grid, const WindowFrame& frame, std::span<const Vec2> polygon, float value) {
    // The pixel mapping mirrors the plane, so reverse to keep CCW order.
    std::vector<Vec2> px;
    px.reserve(polygon.size());
    for (auto it = polygon.rbegin(); it != polygon.rend(); ++it) px.push_back(frame.to_pixel(*it));
    const Aabb b = bounds_of(px);
    const int c0 = std::max(0, static_cast<int>(std::floor(b.lo.x - 0.5)));
    const int c1 = std::min(grid.width() - 1, static_cast<int>(std::ceil(b.hi.x - 0.5)));
    const int r0 = std::max(0, static_cast<int>(std::floor(b.lo.y - 0.5)));
    const int r1 = std::min(grid.height() - 1, static_cast<int>(std::ceil(b.hi.y - 0.5)));
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            if (!point_in_convex(px, {c + 0.5, r + 0.5})) continue;
            float& cell = grid[Cell{c, r}];
            cell = std::max(cell, value);
        }
    }
}

void draw_heading_line(ChannelGrid& grid, const WindowFrame& frame, double heading) {
    const Vec2 start = frame.to_pixel(frame.center);
    const Vec2 dir = frame.to_pixel(frame.center + unit_from_angle(heading)) - start;  // pixels per metre
    // March to the window border, then draw a Bresenham line between the two end cells.
    double t_exit = std::numeric_limits<double>::infinity();
    if (dir.x > 0) t_exit = std::min(t_exit, (grid.width() - start.x) / dir.x);
    if (dir.x < 0) t_exit = std::min(t_exit, -start.x / dir.x);
    if (dir.y > 0) t_exit = std::min(t_exit, (grid.height() - start.y) / dir.y);
    if (dir.y < 0) t_exit = std::min(t_exit, -start.y / dir.y);
    const Vec2 nudge = normalized(dir) * 1e-6;
    const Vec2 a = start + nudge, e = start + dir * t_exit - nudge;
    int x0 = static_cast<int>(std::floor(a.x)), y0 = static_cast<int>(std::floor(a.y));
    const int x1 = static_cast<int>(std::floor(e.x)), y1 = static_cast<int>(std::floor(e.y));
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (grid.contains(Cell{x0, y0})) grid[Cell{x0, y0}] = 1.0f;
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) { err += dy; x0 += sx; }
        if (e2 <= dx) { err += dx; y0 += sy; }
    }
}

ObservationRenderer::ObservationRenderer(const EnvConfig& config, const OccupancyGrid& static_map,
                                         const GoalRegion& goal, DistanceGrid goal_dt)
    : kind_(config.kind), window_(config.window), resolution_(config.resolution), goal_(goal),
      goal_dt_(std::move(goal_dt)) {
    const double w = static_map.width() * static_map.resolution();
    const double h = static_map.height() * static_map.resolution();
    map_bounds_ = {static_map.origin(), static_map.origin() + Vec2{w, h}};
    map_diagonal_ = std::hypot(w, h);
}

std::vector<std::string> ObservationRenderer::channel_names(EnvKind kind) {
    switch (kind) {
        case EnvKind::maze: return {"static_occupancy", "movable_occupancy", "robot_footprint", "goal_dt"};
        case EnvKind::ship_ice:
            return {"static_occupancy", "movable_occupancy", "robot_footprint", "goal_dt", "heading_line"};
        case EnvKind::box_delivery:
        case EnvKind::area_clearing: return {"occupancy", "robot_footprint", "egocentric_dt", "goal_dt"};
    }
    return {};
}

WindowFrame ObservationRenderer::frame_for(const Pose& robot) const {
    const double angle = kind_ == EnvKind::ship_ice ? std::numbers::pi / 2.0 : robot.theta;
    return WindowFrame{robot.position(), angle, window_, window_, resolution_};
}

ChannelGrid ObservationRenderer::static_channel(const WorldState& world, const WindowFrame& f) const {
    ChannelGrid g(window_, window_, resolution_);
    const double reach = window_ * resolution_;
    const Aabb view{f.center - Vec2{reach, reach}, f.center + Vec2{reach, reach}};
    for (const Body& b : world.bodies) {
        if (!b.is_fixed()) continue;
        const auto verts = b.world_vertices();
        if (bounds_of(verts).overlaps(view)) rasterize_window(g, f, verts, kStaticValue);
    }
    for (int r = 0; r < window_; ++r) {
        for (int c = 0; c < window_; ++c) {
            if (!map_bounds_.contains(f.cell_center(r, c))) g[Cell{c, r}] = kStaticValue;
        }
    }
    return g;
}

Observation ObservationRenderer::render(const WorldState& world, const std::vector<MovableStyle>& styles) const {
    const Body& robot = world.robot();
    const WindowFrame f = frame_for(robot.pose);
    const auto style_of = [&](const Body& b) {
        const auto i = static_cast<std::size_t>(b.id - 1);
        return i < styles.size() ? styles[i] : MovableStyle::normal;
    };

    ChannelGrid statics = static_channel(world, f);
    ChannelGrid footprint(window_, window_, resolution_);
    rasterize_window(footprint, f, robot.world_vertices(), 1.0f);

    ChannelGrid goal_dt(window_, window_, resolution_);
    for (int r = 0; r < window_; ++r) {
        for (int c = 0; c < window_; ++c) {
            const Vec2 p = f.cell_center(r, c);
            const double d = sample_distance(goal_dt_, p, goal_.contains(p));
            goal_dt[Cell{c, r}] = d == kUnreachable ? 1.0f : static_cast<float>(std::min(1.0, d / map_diagonal_));
        }
    }

    Observation obs;
    obs.names = channel_names(kind_);
    if (is_navigation(kind_)) {
        ChannelGrid movable(window_, window_, resolution_);
        for (const Body& b : world.bodies) {
            if (b.kind == BodyKind::movable) rasterize_window(movable, f, b.world_vertices(), 1.0f);
        }
        obs.channels = {std::move(statics), std::move(movable), std::move(footprint), std::move(goal_dt)};
        if (kind_ == EnvKind::ship_ice) {
            ChannelGrid line(window_, window_, resolution_);
            draw_heading_line(line, f, robot.pose.theta);
            obs.channels.push_back(std::move(line));
        }
        return obs;
    }

    // Egocentric DT: from the robot centre over the window's static occupancy.
    OccupancyGrid occ(window_, window_, resolution_);
    for (std::size_t i = 0; i < occ.size(); ++i) occ.data()[i] = statics.data()[i] > 0.0f ? 1 : 0;
    const int h = window_ / 2;
    const std::vector<Cell> centre{{h - 1, h - 1}, {h, h - 1}, {h - 1, h}, {h, h}};
    for (const Cell& c : centre) occ[c] = 0;
    const DistanceGrid ego = distance_transform(occ, centre);
    const double window_diagonal = std::numbers::sqrt2 * window_ * resolution_;
    ChannelGrid ego_dt(window_, window_, resolution_);
    for (std::size_t i = 0; i < ego.size(); ++i) {
        const double d = ego.data()[i];
        ego_dt.data()[i] = d == kUnreachable ? 1.0f : static_cast<float>(std::min(1.0, d / window_diagonal));
    }

    ChannelGrid combined = statics;
    for (const Body& b : world.bodies) {
        if (b.kind != BodyKind::movable) continue;
        switch (style_of(b)) {
            case MovableStyle::normal: rasterize_window(combined, f, b.world_vertices(), kMovableValue); break;
            case MovableStyle::completed: rasterize_window(combined, f, b.world_vertices(), kCompletedValue); break;
            case MovableStyle::hidden: break;
        }
    }
    obs.channels = {std::move(combined), std::move(footprint), std::move(ego_dt), std::move(goal_dt)};
    return obs;
}

nlohmann::json observation_to_json(const Observation& obs) {
    nlohmann::json channels = nlohmann::json::array();
    for (std::size_t i = 0; i < obs.channels.size(); ++i) {
        const ChannelGrid& g = obs.channels[i];
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < g.height(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < g.width(); ++c) row.push_back(g[Cell{c, r}]);
            rows.push_back(std::move(row));
        }
        channels.push_back({{"name", obs.names[i]}, {"data", std::move(rows)}});
    }
    return {{"height", obs.height()}, {"width", obs.width()}, {"channels", std::move(channels)}};
}

std::vector<std::filesystem::path> write_pgm(const Observation& obs, const std::filesystem::path& stem) {
    std::vector<std::filesystem::path> written;
    for (std::size_t i = 0; i < obs.channels.size(); ++i) {
        const ChannelGrid& g = obs.channels[i];
        std::filesystem::path path = stem;
        path += "_" + obs.names[i] + ".pgm";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "P5\n" << g.width() << ' ' << g.height() << "\n255\n";
        for (int r = 0; r < g.height(); ++r) {
            for (int c = 0; c < g.width(); ++c) {
                const float v = std::clamp(g[Cell{c, r}], 0.0f, 1.0f);
                out.put(static_cast<char>(std::lround(v * 255.0f)));
            }
        }
        written.push_back(std::move(path));
    }
    return written;
}

}  // namespace npin
